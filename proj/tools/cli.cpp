#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "gridv2g/bev.hpp"
#include "gridv2g/curves.hpp"
#include "gridv2g/dispatch.hpp"
#include "gridv2g/errors.hpp"
#include "gridv2g/format.hpp"
#include "gridv2g/synthetic.hpp"

namespace gridv2g::cli {

namespace {

std::string trim_copy(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, text));
  }
}

int to_int(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != static_cast<double>(static_cast<int>(v))) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", key, text));
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim_copy(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

std::string sha256_of_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "unavailable";
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

struct Run {
  std::string command;
  KeyValues settings;
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> outputs;

  void write_file(const std::string& name, const std::function<void(std::ostream&)>& body) {
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = cfg.out_dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError(fmt::format("cannot write '{}'", path.string()));
    body(f);
    outputs.push_back(name);
  }

  GridSeries load_series() {
    GridSeries series;
    if (cfg.input) {
      if (!std::filesystem::exists(*cfg.input)) {
        throw InputError(fmt::format("input file '{}' does not exist", cfg.input->string()));
      }
      auto parsed = parse_csv(*cfg.input, cfg.columns);
      for (const auto& e : parsed.errors) {
        err << fmt::format("row error at line {}: {}\n", e.line, e.message);
      }
      series = canonicalize(std::move(parsed.records));
      series.provenance.source = cfg.input->string();
    } else if (cfg.synthetic) {
      series = synthetic_year();
    } else {
      throw InputError("no input: pass --input FILE or --synthetic");
    }
    series.provenance.write(err);
    return series;
  }

  NormalizedYear load_year(double default_solar_scale) {
    const auto series = load_series();
    auto seg = segment_weeks(series);
    if (seg.discarded > 0) {
      err << fmt::format("discarded {} trailing samples after week 52\n", seg.discarded);
    }
    ScalingSpec spec = cfg.scaling;
    if (!cfg.solar_scale_set) spec.solar_scale = default_solar_scale;
    return normalize(std::move(seg.weeks), spec);
  }

  void write_manifest() {
    write_file("run_manifest.txt", [&](std::ostream& os) {
      os << "software = gridv2g " << kVersion << '\n' << "command = " << command << '\n';
      if (cfg.input) {
        os << "input = " << cfg.input->string() << '\n'
           << "input_sha256 = " << sha256_of_file(*cfg.input) << '\n';
      } else {
        os << "input = synthetic\n";
      }
      for (const auto& [k, v] : settings) os << "config." << k << " = " << v << '\n';
      for (const auto& o : outputs) os << "output = " << o << '\n';
      const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
      os << "run_time = " << format_timestamp(now) << '\n';
    });
  }
};

// Subcommands -------------------------------------------------------------

void cmd_ingest(Run& r, bool check_only) {
  const auto series = r.load_series();
  const auto seg = segment_weeks(series);
  r.out << fmt::format("samples: {}\nstart: {}\nweeks: {}\ndiscarded: {}\n", series.size(),
                       format_timestamp(series.start), seg.weeks.size(), seg.discarded);
  if (!check_only) {
    r.write_file("canonical_series.csv", [&](std::ostream& os) { write_grid_csv(os, series); });
  }
}

void cmd_histogram(Run& r) {
  const auto year = r.load_year(1.0);
  const auto trace = extrapolate_wind(year, year.reference_capacity);
  const auto hist = wind_histogram(trace, 1.0, year.reference_capacity);
  r.write_file("fig1_histogram.csv", [&](std::ostream& os) { write_histogram_csv(os, hist); });
  r.out << fmt::format("bins: {}\nbin [0,1) GWe: {:.2f}% of samples\n", hist.bins.size(),
                       hist.bins.empty() ? 0.0 : hist.bins.front().percent);
}

void cmd_curves(Run& r) {
  if (r.cfg.hdrm_values.empty()) throw ConfigError("curves: the Hdrm list is empty");
  const auto year = r.load_year(2.0);
  const auto caps = r.cfg.capacities.value_or(default_capacity_grid());
  const SweepOptions sweep{r.cfg.threads};
  const double base = r.cfg.base_generation.value_or(13.0);

  const auto fig5 = annual_curve(year, {caps, HdrmFamily{year.mean_demand() - base}}, sweep);
  r.write_file("fig5_curve.csv", [&](std::ostream& os) {
    write_curves_csv(os, std::span<const CharacteristicCurve>(&fig5, 1));
  });

  std::vector<CharacteristicCurve> hdrm_curves;
  for (const double h : r.cfg.hdrm_values) {
    hdrm_curves.push_back(annual_curve(year, {caps, HdrmFamily{h}}, sweep));
  }
  r.write_file("fig7_families.csv", [&](std::ostream& os) { write_curves_csv(os, hdrm_curves); });

  std::vector<double> sizes{0.0};
  for (const double s : r.cfg.fleet_sizes.value_or(std::vector<double>{15, 20, 25, 30, 35})) {
    if (s != 0.0) sizes.push_back(s);
  }
  std::vector<CharacteristicCurve> bev_curves;
  for (const double s : sizes) {
    BevFleetSpec fleet = r.cfg.fleet;
    fleet.fleet_millions = s;
    bev_curves.push_back(annual_curve(year, {caps, BevFamily{fleet, base}}, sweep));
  }
  r.write_file("fig12_families.csv", [&](std::ostream& os) { write_curves_csv(os, bev_curves); });

  r.out << fmt::format("annual mean demand {:.2f} GWe; base {:.1f} GWe\n", year.mean_demand(), base);
  for (const auto& p : fig5.points) {
    r.out << fmt::format("  {:5.1f} GWc -> {:6.2f} GWe\n", p.capacity, p.mean_wind);
  }
}

std::string week_suffix(std::size_t n_weeks, int week) {
  return n_weeks > 1 ? fmt::format("_w{:02d}", week) : std::string{};
}

void cmd_bev(Run& r) {
  const auto year = r.load_year(1.0);
  const auto weeks = r.cfg.weeks.value_or(std::vector<int>{17});
  for (const int w : weeks) {
    const auto& week = year.week(w);
    const auto u = consumption_profile(r.cfg.fleet, week);
    const auto schedule = leveling_schedule(week, r.cfg.fleet);
    const auto soc = soc_trajectory(schedule, u.power, r.cfg.fleet);
    const auto suffix = week_suffix(weeks.size(), w);
    r.write_file("fig9_schedule" + suffix + ".csv", [&](std::ostream& os) {
      write_schedule_csv(os, week, schedule, u.power, soc);
    });
    r.write_file("fig11_soc" + suffix + ".csv", [&](std::ostream& os) {
      os << "timestamp,soc_gwh\n";
      for (std::size_t i = 0; i < soc.energy.size(); ++i) {
        os << format_timestamp(week.time_at(i)) << ',' << num(soc.energy[i]) << '\n';
      }
    });
    r.out << fmt::format(
        "week {}: mean demand {:.1f} GWe, level {:.1f} GWe, day/night consumption {:.2f}/{:.2f} GW\n"
        "  stored energy {:.0f}..{:.0f} GWh of {:.0f} GWh: {}\n",
        w, week.mean_demand(), schedule.level, u.day_power, u.night_power, soc.min_energy,
        soc.max_energy, soc.capacity, soc.feasible ? "feasible" : "INFEASIBLE");
    if (!soc.feasible) {
      r.out << fmt::format("  worst excursion {:.1f} GWh at sample {}\n", soc.worst_excursion,
                           soc.worst_index);
    }
    if (schedule.clipped_samples > 0) {
      r.out << fmt::format("  v2g limit clipped {} samples ({:.1f} GWh)\n",
                           schedule.clipped_samples, schedule.clipped_energy);
    }
  }
}

void cmd_lull(Run& r) {
  const auto year = r.load_year(1.0);
  const auto weeks = r.cfg.weeks.value_or(std::vector<int>{3});
  const auto caps = r.cfg.capacities.value_or(std::vector<double>{20, 40, 60, 80});
  const double base = r.cfg.base_generation.value_or(7.0);
  for (const int w : weeks) {
    const auto& week = year.week(w);
    const auto report = lull_report(week, year.reference_capacity, r.cfg.fleet, base, caps);
    const auto& head = report.headline();
    const DispatchConfig cfg{base, CapMode::Leveled, report.level};
    const auto dispatch = dispatch_week(week, WindFleet{year.reference_capacity, head.capacity}, cfg);
    const auto wind = extrapolate_wind(week.wind, year.reference_capacity, head.capacity);
    const auto unmanaged = unmanaged_peak(week, r.cfg.fleet, base, wind);
    const double annual_gt = annual_mean_gas_turbine(year, r.cfg.fleet, base, head.capacity);

    const auto suffix = week_suffix(weeks.size(), w);
    r.write_file("fig15_gt" + suffix + ".csv",
                 [&](std::ostream& os) { write_dispatch_csv(os, week, cfg, dispatch); });
    r.write_file("lull_capacities" + suffix + ".csv",
                 [&](std::ostream& os) { write_lull_csv(os, report); });
    std::ostringstream text;
    write_lull_summary(text, report);
    text << fmt::format("unmanaged charging at {:.0f} GWc: peak GT {:.1f} GWe\n", head.capacity,
                        unmanaged.peak_gas_turbine)
         << fmt::format("annual mean GT at {:.0f} GWc: {:.2f} GWe; utilization of a {:.1f} GWe "
                        "fleet {:.1f}%\n",
                        head.capacity, annual_gt, head.peak_gas_turbine,
                        100.0 * gt_utilization(annual_gt, head.peak_gas_turbine));
    r.write_file("lull_report" + suffix + ".txt", [&](std::ostream& os) { os << text.str(); });
    r.out << text.str();
  }
}

void cmd_table2(Run& r) {
  const auto year = r.load_year(2.0);
  const auto sizes = r.cfg.fleet_sizes.value_or(std::vector<double>{15, 20, 25, 30, 35});
  Table2Options options;
  options.base_generation = r.cfg.base_generation.value_or(13.0);
  options.capacities = r.cfg.capacities.value_or(default_capacity_grid());
  options.refine_step = r.cfg.refine_step;
  options.sweep.threads = r.cfg.threads;
  const auto rows = build_table2(year, sizes, r.cfg.fleet, r.cfg.constants, options);
  r.write_file("table2.csv", [&](std::ostream& os) { write_table2_csv(os, rows); });
  r.write_file("table1_emissions.csv", [](std::ostream& os) { write_emissions_csv(os); });
  r.out << "fleet(M)  power(GWe)  wind(GWc)  storage(GWh)  CO2(MT)  cost(EUR bn)\n";
  for (const auto& row : rows) {
    r.out << fmt::format("{:8.0f}  {:10.1f}  {:9.1f}  {:12.0f}  {:7.1f}  {:12.0f}\n",
                         row.fleet_millions, display_round(row.mean_power, 1),
                         display_round(row.wind_capacity, 1), display_round(row.storage, 0),
                         display_round(row.emissions_reduction, 1),
                         display_round(row.battery_cost, 0));
  }
}

void cmd_synth(Run& r) {
  const auto series = synthetic_year();
  r.write_file("synthetic_year.csv", [&](std::ostream& os) { write_grid_csv(os, series); });
  r.out << fmt::format("wrote {} samples\n", series.size());
}

}  // namespace

KeyValues parse_config(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = trim_copy(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("config line {}: expected key = value", line_no));
    }
    const auto key = trim_copy(std::string_view(text).substr(0, eq));
    if (key.empty()) throw ConfigError(fmt::format("config line {}: empty key", line_no));
    kv[key] = trim_copy(std::string_view(text).substr(eq + 1));
  }
  return kv;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open config file '{}'", path.string()));
  return parse_config(in);
}

RunConfig build_config(const KeyValues& values) {
  RunConfig c;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"input", [&](auto&, auto& v) { if (!v.empty()) c.input = v; }},
      {"synthetic", [&](auto& k, auto& v) { c.synthetic = to_bool(k, v); }},
      {"timestamp_column", [&](auto&, auto& v) { c.columns.timestamp = v; }},
      {"demand_column", [&](auto&, auto& v) { c.columns.demand = v; }},
      {"wind_column", [&](auto&, auto& v) { c.columns.wind = v; }},
      {"solar_column", [&](auto&, auto& v) { c.columns.solar = v; }},
      {"embedded_multiplier", [&](auto& k, auto& v) { c.scaling.embedded_multiplier = to_double(k, v); }},
      {"reference_capacity", [&](auto& k, auto& v) { c.scaling.reference_capacity = to_double(k, v); }},
      {"capacity_factor", [&](auto& k, auto& v) { c.scaling.target_capacity_factor = to_double(k, v); }},
      {"solar_scale", [&](auto& k, auto& v) {
         c.scaling.solar_scale = to_double(k, v);
         c.solar_scale_set = true;
       }},
      {"fleet_millions", [&](auto& k, auto& v) { c.fleet.fleet_millions = to_double(k, v); }},
      {"daily_energy_kwh", [&](auto& k, auto& v) { c.fleet.daily_energy_kwh = to_double(k, v); }},
      {"battery_kwh", [&](auto& k, auto& v) { c.fleet.battery_kwh = to_double(k, v); }},
      {"night_fraction", [&](auto& k, auto& v) { c.fleet.night_fraction = to_double(k, v); }},
      {"day_start_hour", [&](auto& k, auto& v) { c.fleet.day_start_hour = to_int(k, v); }},
      {"day_end_hour", [&](auto& k, auto& v) { c.fleet.day_end_hour = to_int(k, v); }},
      {"initial_soc", [&](auto& k, auto& v) { c.fleet.initial_soc_fraction = to_double(k, v); }},
      {"v2g_power_limit", [&](auto& k, auto& v) {
         if (v.empty() || v == "none") {
           c.fleet.v2g_power_limit.reset();
         } else {
           c.fleet.v2g_power_limit = to_double(k, v);
         }
       }},
      {"round_trip_efficiency", [&](auto& k, auto& v) { c.fleet.round_trip_efficiency = to_double(k, v); }},
      {"base_gen", [&](auto& k, auto& v) { c.base_generation = to_double(k, v); }},
      {"capacities", [&](auto& k, auto& v) { c.capacities = to_list(k, v); }},
      {"hdrm", [&](auto& k, auto& v) { c.hdrm_values = to_list(k, v); }},
      {"fleet_sizes", [&](auto& k, auto& v) { c.fleet_sizes = to_list(k, v); }},
      {"weeks", [&](auto& k, auto& v) {
         std::vector<int> weeks;
         for (const double w : to_list(k, v)) weeks.push_back(to_int(k, num(w)));
         c.weeks = weeks;
       }},
      {"out_dir", [&](auto&, auto& v) { c.out_dir = v; }},
      {"threads", [&](auto& k, auto& v) {
         const int t = to_int(k, v);
         if (t < 0) throw ConfigError("threads must be >= 0");
         c.threads = static_cast<unsigned>(t);
       }},
      {"refine_step", [&](auto& k, auto& v) { c.refine_step = to_double(k, v); }},
      {"gas_carbon_intensity", [&](auto& k, auto& v) { c.constants.gas_carbon_intensity = to_double(k, v); }},
      {"baseline_fleet_emissions", [&](auto& k, auto& v) { c.constants.baseline_fleet_emissions = to_double(k, v); }},
      {"baseline_fleet_millions", [&](auto& k, auto& v) { c.constants.baseline_fleet_millions = to_double(k, v); }},
      {"battery_unit_cost", [&](auto& k, auto& v) { c.constants.battery_unit_cost = to_double(k, v); }},
      {"baseline_wind_gwe", [&](auto& k, auto& v) { c.constants.baseline_wind_gwe = to_double(k, v); }},
  };
  for (const auto& [key, value] : values) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(fmt::format("unknown config key '{}'", key));
    it->second(key, value);
  }
  c.scaling.validate();
  c.fleet.validate();
  c.constants.validate();
  if (c.base_generation && *c.base_generation < 0.0) throw ConfigError("base_gen must be >= 0");
  if (c.fleet_sizes) {
    for (const double s : *c.fleet_sizes) {
      if (s < 0.0) throw ConfigError("fleet sizes must be >= 0");
    }
  }
  return c;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wind fleet, grid and V2G battery-electric-vehicle fleet simulator", "gridv2g"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  KeyValues flags;
  std::string config_path;
  bool seedless = false;
  bool check_only = false;

  auto add_common = [&](CLI::App* sub) {
    auto setter = [&flags](const std::string& key) {
      return [&flags, key](const std::string& v) { flags[key] = v; };
    };
    sub->add_option("--config", config_path, "Key = value configuration file");
    sub->add_option_function<std::string>("--input", setter("input"), "Grid CSV (MW, 5-minute)");
    sub->add_flag_function("--synthetic",
                           [&flags](std::int64_t) { flags["synthetic"] = "true"; },
                           "Use the built-in synthetic year instead of --input");
    sub->add_option_function<std::string>("--out-dir", setter("out_dir"), "Output directory");
    sub->add_option_function<std::string>("--weeks", setter("weeks"), "Week numbers, e.g. 3,17");
    sub->add_option_function<std::string>("--capacities", setter("capacities"), "Wind fleet capacities in GWc");
    sub->add_option_function<std::string>("--fleet-sizes", setter("fleet_sizes"), "BEV fleet sizes in millions");
    sub->add_option_function<std::string>("--fleet", setter("fleet_millions"), "BEV fleet size in millions");
    sub->add_option_function<std::string>("--hdrm", setter("hdrm"), "Hdrm values in GWe");
    sub->add_option_function<std::string>("--base-gen", setter("base_gen"), "Base generation in GWe");
    sub->add_option_function<std::string>("--solar-scale", setter("solar_scale"), "Multiplier on recorded solar");
    sub->add_option_function<std::string>("--threads", setter("threads"), "Worker threads, 0 = all cores");
    sub->add_option_function<std::vector<std::string>>(
        "--set",
        [&flags](const std::vector<std::string>& items) {
          for (const auto& item : items) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value");
            flags[trim_copy(item.substr(0, eq))] = trim_copy(item.substr(eq + 1));
          }
        },
        "Override any config key (key=value)");
    sub->add_flag("--seedless", seedless, "Reserved; rejected because runs are deterministic");
  };

  auto* ingest = app.add_subcommand("ingest", "Validate and canonicalize a grid CSV");
  ingest->add_flag("--check", check_only, "Validate only; write no files");
  auto* histogram = app.add_subcommand("histogram", "Wind generation histogram (1 GWe bins)");
  auto* curves = app.add_subcommand("curves", "Characteristic curves: plain, Hdrm and BEV families");
  auto* bev = app.add_subcommand("bev", "V2G leveling schedule and stored-energy trajectory");
  auto* lull = app.add_subcommand("lull", "Wind-lull gas turbine stress report");
  auto* table2 = app.add_subcommand("table2", "Wind fleet sizes needed to power BEV fleets");
  auto* synth = app.add_subcommand("synth", "Write the built-in synthetic year as CSV");
  for (auto* sub : {ingest, histogram, curves, bev, lull, table2, synth}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 3;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 3;
  }

  try {
    if (seedless) throw ConfigError("--seedless is reserved: this simulator uses no randomness");
    KeyValues settings;
    if (!config_path.empty()) settings = read_config_file(config_path);
    for (const auto& [k, v] : flags) settings[k] = v;

    Run r{app.get_subcommands().front()->get_name(), settings, build_config(settings), out, err, {}};
    if (r.command == "ingest") {
      cmd_ingest(r, check_only);
    } else if (r.command == "histogram") {
      cmd_histogram(r);
    } else if (r.command == "curves") {
      cmd_curves(r);
    } else if (r.command == "bev") {
      cmd_bev(r);
    } else if (r.command == "lull") {
      cmd_lull(r);
    } else if (r.command == "table2") {
      cmd_table2(r);
    } else if (r.command == "synth") {
      cmd_synth(r);
    }
    if (!(r.command == "ingest" && check_only)) r.write_manifest();
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 3;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const SimulationError& e) {
    err << "simulation error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace gridv2g::cli
