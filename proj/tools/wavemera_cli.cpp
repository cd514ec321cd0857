// Copyright 2026 The wavemera Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wavemera/wavemera.hpp"

namespace {

using namespace wavemera;

enum ExitCode : int {
  kOk = 0,
  kInvalidArguments = 2,
  kDesignInfeasible = 3,
  kVerificationFailed = 4,
  kIoFailure = 5,
};

enum class Format { csv, json };

struct RunConfig {
  std::string command;
  int K = 3;
  int L = 3;
  std::optional<int> layers;
  int grid = kDefaultKgridSize;
  int range = 32;
  int box = 32;
  std::uint64_t seed = 1;
  int trials = 50;
  int Kmax = 4;
  int Lmax = 4;
  std::string curve = "scaling";
  std::string source = "exact";
  std::string output;
  Format format = Format::csv;
  bool no_cache = false;
};

class VerificationFailure : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string provenance(const RunConfig& c) {
  std::ostringstream s;
  s << "wavemera " << kVersion << " command=" << c.command << " K=" << c.K << " L=" << c.L;
  if (c.layers) s << " layers=" << *c.layers;
  s << " grid=" << c.grid << " range=" << c.range << " box=" << c.box << " seed=" << c.seed
    << " trials=" << c.trials << " Kmax=" << c.Kmax << " Lmax=" << c.Lmax << " curve=" << c.curve
    << " source=" << c.source;
  return s.str();
}

json with_provenance(const RunConfig& c, json body) {
  json j;
  j["provenance"] = provenance(c);
  for (auto& [k, v] : body.items()) j[k] = v;
  return j;
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to standard output");
  } else {
    write_file_atomic(c.output, text);
  }
}

void emit_json(const RunConfig& c, json body) { emit(c, with_provenance(c, std::move(body)).dump(2) + "\n"); }

FilterPair pair_for(const RunConfig& c, int K, int L) { return load_or_design(K, L, store_directory(), !c.no_cache); }
FilterPair pair_for(const RunConfig& c) { return pair_for(c, c.K, c.L); }

int layers_or(const RunConfig& c, int fallback) { return c.layers.value_or(fallback); }

std::string cell(double v) { return format_double(v); }
std::string cell(long long v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }

// ---------------------------------------------------------------------------

void run_design(const RunConfig& c) {
  const FilterPair p = pair_for(c);
  const PairDiagnostics d = diagnose(p);
  if (c.format == Format::json) {
    json j = to_json(p);
    j["diagnostics"] = {{"orthonormality", d.orthonormality}, {"dc_gain", d.dc_gain},
                        {"mirror", d.mirror},                 {"magnitude", d.magnitude},
                        {"moments", d.moments},               {"wavelet_orthogonality", d.wavelet_orthogonality}};
    emit_json(c, j);
    return;
  }
  CsvWriter w(provenance(c), {"n", "h_s", "g_s", "h_w", "g_w"});
  std::int64_t lo = std::min({p.h_s.offset, p.g_s.offset, p.h_w.offset, p.g_w.offset});
  std::int64_t hi = std::max({p.h_s.end(), p.g_s.end(), p.h_w.end(), p.g_w.end()});
  for (std::int64_t n = lo; n < hi; ++n)
    w.row({cell(static_cast<long long>(n)), cell(p.h_s[n].real()), cell(p.g_s[n].real()), cell(p.h_w[n].real()),
           cell(p.g_w[n].real())});
  emit(c, w.str());
}

void run_epsilon_sweep(const RunConfig& c) {
  json rows = json::array();
  CsvWriter w(provenance(c), {"K", "L", "epsilon"});
  for (int K = 1; K <= c.Kmax; ++K)
    for (int L = 1; L <= c.Lmax; ++L) {
      const FilterPair p = pair_for(c, K, L);
      w.row({cell(K), cell(L), cell(p.epsilon)});
      rows.push_back({{"K", K}, {"L", L}, {"epsilon", p.epsilon}});
    }
  if (c.format == Format::json)
    emit_json(c, {{"rows", rows}});
  else
    emit(c, w.str());
}

void run_dispersion(const RunConfig& c) {
  if (c.curve != "scaling" && c.curve != "wavelet")
    throw PreconditionError("--curve must be scaling or wavelet");
  const FilterPair p = pair_for(c);
  const int levels = layers_or(c, 6);
  const auto kgrid = default_kgrid(c.grid);
  CsvWriter w(provenance(c), {"k", "value", "level"});
  json curves = json::array();
  std::vector<Dispersion> all;
  for (int l = 1; l <= levels; ++l) {
    const Dispersion d = renormalized_dispersion(p, l, kgrid);
    const SampledCurve& s = c.curve == "scaling" ? d.e_curve : d.eps_curve;
    json values = json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double v = std::ldexp(s.values[i].real(), l);
      w.row({cell(s.kgrid[i]), cell(v), cell(l)});
      values.push_back(v);
    }
    curves.push_back({{"level", l},
                      {"scaled_values", values},
                      {"scaling_structure_residual", scaling_structure_residual(d)},
                      {"wavelet_interaction_residual", wavelet_interaction_residual(d)}});
    all.push_back(d);
  }
  if (c.format == Format::json) {
    json j = {{"curve", c.curve}, {"kgrid", kgrid}, {"levels", curves}};
    if (levels >= 2) j["fixed_point_ratio"] = fixed_point_ratio(all[levels - 1], all[levels - 2]);
    emit_json(c, j);
  } else {
    emit(c, w.str());
  }
}

void run_phase(const RunConfig& c) {
  const FilterPair p = pair_for(c);
  const int level = layers_or(c, 1);
  const PhaseDifference pd = phase_difference(p, level, default_kgrid(c.grid));
  CsvWriter w(provenance(c), {"k", "value", "target", "valid", "level"});
  for (std::size_t i = 0; i < pd.measured.size(); ++i)
    w.row({cell(pd.measured.kgrid[i]), cell(pd.measured.is_valid(i) ? std::arg(pd.measured.values[i]) : 0.0),
           cell(std::arg(pd.target.values[i])), cell(pd.measured.is_valid(i) ? 1 : 0), cell(level)});
  if (c.format == Format::json)
    emit_json(c, {{"level", level},
                  {"max_deviation", pd.max_deviation(0.1, kPi - 0.1)},
                  {"mode_phase_error", mode_phase_error(p, level, default_kgrid(c.grid))},
                  {"epsilon_times_level", p.epsilon * level}});
  else
    emit(c, w.str());
}

void run_support(const RunConfig& c) {
  const FilterPair p = pair_for(c);
  const int level = layers_or(c, 1);
  const FermiSupport fs = fermi_support(p, level, default_kgrid(c.grid));
  if (c.format == Format::json) {
    emit_json(c, {{"level", level}, {"side_lobe", fs.side_lobe}});
    return;
  }
  CsvWriter w(provenance(c), {"k", "value", "side"});
  std::map<double, std::pair<double, const char*>> rows;
  for (std::size_t i = 0; i < fs.inside.size(); ++i) rows[fs.inside.kgrid[i]] = {fs.inside.values[i].real(), "inside"};
  for (std::size_t i = 0; i < fs.outside.size(); ++i)
    rows[fs.outside.kgrid[i]] = {fs.outside.values[i].real(), "outside"};
  for (const auto& [k, v] : rows) w.row({cell(k), cell(v.first), v.second});
  emit(c, w.str());
}

void run_energy1d(const RunConfig& c) {
  const FilterPair p = pair_for(c);
  const int layers = layers_or(c, 16);
  const double exact = -2.0 / kPi;
  CsvWriter w(provenance(c), {"K", "L", "depth", "value", "rel_error"});
  const HadamardSign sign = filled_sign(p);
  double value = 0.0;
  for (int l = 1; l <= layers; ++l) {
    value += std::ldexp(mode_energy(assemble_mode(p, l, sign)), -(l + 1));
    w.row({cell(c.K), cell(c.L), cell(l), cell(value), cell(std::abs(value - exact) / std::abs(exact))});
  }
  if (c.format == Format::json)
    emit_json(c, {{"K", c.K},
                  {"L", c.L},
                  {"layers", layers},
                  {"value", value},
                  {"exact", exact},
                  {"rel_error", std::abs(value - exact) / std::abs(exact)}});
  else
    emit(c, w.str());
}

void run_energy2d(const RunConfig& c) {
  const FilterPair p = pair_for(c);
  const int layers = layers_or(c, 10);
  const double exact = -8.0 / (kPi * kPi);
  CsvWriter w(provenance(c), {"K", "L", "depth", "value", "rel_error"});
  json signs = json::array();
  double value = 0.0;
  for (int d = 1; d <= layers; ++d) {
    // Extend the (Lx, Ly) = (d-1, d-1) square by its new row and column.
    for (int l = 1; l <= d; ++l) {
      const Mode2D a = mode2d(p, d, l);
      value += std::ldexp(a.energy, -(d + l + 1));
      signs.push_back({{"lx", d}, {"ly", l}, {"sign", sign_value(a.combination)}, {"alternative_energy", a.alternative_energy}});
      if (l != d) {
        const Mode2D b = mode2d(p, l, d);
        value += std::ldexp(b.energy, -(d + l + 1));
        signs.push_back({{"lx", l}, {"ly", d}, {"sign", sign_value(b.combination)}, {"alternative_energy", b.alternative_energy}});
      }
    }
    w.row({cell(c.K), cell(c.L), cell(d), cell(value), cell(std::abs(value - exact) / std::abs(exact))});
  }
  if (c.format == Format::json)
    emit_json(c, {{"K", c.K},
                  {"L", c.L},
                  {"layers", layers},
                  {"value", value},
                  {"exact", exact},
                  {"rel_error", std::abs(value - exact) / std::abs(exact)},
                  {"branch_signs", signs}});
  else
    emit(c, w.str());
}

void run_twopoint(const RunConfig& c) {
  const FilterPair p = pair_for(c);
  const FilledModeSet modes(p, layers_or(c, 14));
  CsvWriter w(provenance(c), {"x", "y", "re", "im"});
  double max_err = 0.0;
  for (int x = 0; x < c.range; ++x)
    for (int y = 0; y < c.range; ++y) {
      const cplx v = modes.two_point(x, y);
      max_err = std::max(max_err, std::abs(v - exact_two_point(y - x)));
      w.row({cell(x), cell(y), cell(v.real()), cell(v.imag())});
    }
  if (c.format == Format::json)
    emit_json(c, {{"layers", modes.layers()}, {"range", c.range}, {"max_error_vs_exact", max_err}});
  else
    emit(c, w.str());
}

void run_entropy1d(const RunConfig& c) {
  if (c.source != "exact" && c.source != "mera") throw PreconditionError("--source must be exact or mera");
  std::optional<FilledModeSet> modes;
  if (c.source == "mera") modes.emplace(pair_for(c), layers_or(c, 14));
  CsvWriter w(provenance(c), {"R", "S_nats"});
  json rows = json::array();
  for (int R = 2; R <= c.range; R *= 2) {
    const auto sites = interval_sites(0, R);
    const double S = modes ? entanglement_entropy(restricted_symbol(*modes, sites))
                           : entanglement_entropy(restricted_symbol(ExactGroundState{}, sites));
    w.row({cell(R), cell(S)});
    rows.push_back({{"R", R}, {"S_nats", S}, {"S_bits", S / std::log(2.0)}});
  }
  if (c.format == Format::json)
    emit_json(c, {{"rows", rows}});
  else
    emit(c, w.str());
}

void run_entropy2d(const RunConfig& c) {
  const FilterPair p = pair_for(c);
  const int layers = layers_or(c, 10);
  CsvWriter w(provenance(c), {"R", "S_nats", "S_over_R"});
  json rows = json::array();
  for (int R = 2; R <= c.box; R *= 2) {
    const double S = entanglement_entropy(box_symbol_2d(p, layers, layers, R));
    w.row({cell(R), cell(S), cell(S / R)});
    rows.push_back({{"R", R}, {"S_nats", S}, {"S_over_R", S / R}, {"S_bits", S / std::log(2.0)}});
  }
  if (c.format == Format::json)
    emit_json(c, {{"layers", layers}, {"rows", rows}});
  else
    emit(c, w.str());
}

json report_json(const BoundReport& r) {
  json j = {{"epsilon", r.epsilon}, {"B", r.B},         {"M", r.M},         {"D", r.D},
            {"N", r.N},             {"C", r.C},         {"delta", r.delta}, {"bound", r.bound},
            {"measured", r.measured}, {"satisfied", r.satisfied}};
  j["layers"] = r.layers ? json(*r.layers) : json(nullptr);
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["gap_violations"] = r.gap_violations;
  j["max_gap"] = r.max_gap;
  return j;
}

void run_bound(const RunConfig& c) {
  const FilterPair p = pair_for(c);
  const FilledModeSet modes(p, layers_or(c, 10));
  const BoundReport r = verify_correlation_bound_random(p, modes, c.trials, c.seed);
  json j = report_json(r);
  j["observables"] = {{"max_N", RandomObservableSpec{}.max_N},
                      {"max_D", RandomObservableSpec{}.max_D},
                      {"layout", "contiguous support, complex Gaussian direction, norm uniform in (0, 1]"}};
  if (c.format == Format::json) {
    emit_json(c, j);
  } else {
    CsvWriter w(provenance(c), {"field", "value"});
    for (auto& [k, v] : j.items()) w.row({k, v.is_string() ? v.get<std::string>() : v.dump()});
    emit(c, w.str());
  }
  if (!r.satisfied) throw VerificationFailure("measured discrepancy exceeds the bound");
}

void run_circuit(const RunConfig& c) {
  const FilterPair p = pair_for(c);
  json branches = json::object();
  for (bool g : {false, true}) {
    const CircuitSpec spec = factor_circuit(p, g);
    const auto [s, w] = recompose_circuit(spec);
    json j = to_json(spec);
    j["recomposition_error"] =
        std::max(max_abs_diff(s, g ? p.g_s : p.h_s), max_abs_diff(w, g ? p.g_w : p.h_w));
    j["orthogonality"] = circuit_orthogonality(spec);
    branches[g ? "g" : "h"] = j;
  }
  if (c.format == Format::json) {
    emit_json(c, {{"K", c.K}, {"L", c.L}, {"branches", branches}});
    return;
  }
  CsvWriter w(provenance(c), {"branch", "layer", "parity", "g00", "g01", "g10", "g11"});
  for (const char* b : {"h", "g"}) {
    int i = 0;
    for (const auto& l : branches[b]["layers"]) {
      const auto& gt = l["gate"];
      w.row({b, cell(i++), l["parity"].get<std::string>(), cell(gt[0][0].get<double>()),
             cell(gt[0][1].get<double>()), cell(gt[1][0].get<double>()), cell(gt[1][1].get<double>())});
    }
  }
  emit(c, w.str());
}

void validate(const RunConfig& c) {
  const auto in = [](long long v, long long lo, long long hi, const char* name) {
    if (v < lo || v > hi)
      throw PreconditionError(std::string(name) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  };
  in(c.K, 1, 12, "--K");
  in(c.L, 1, kMaxDelayFlatness, "--L");
  if (c.layers) in(*c.layers, 1, 20, "--layers");
  in(c.grid, 16, 1 << 16, "--grid");
  in(c.range, 1, 4096, "--range");
  in(c.box, 1, kMaxBox2D, "--box");
  in(c.trials, 1, 100000, "--trials");
  in(c.Kmax, 1, 12, "--Kmax");
  in(c.Lmax, 1, kMaxDelayFlatness, "--Lmax");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavemera: wavelet MERA for free fermions"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "csv";
  int layers_flag = 0;

  const std::map<std::string, std::string> commands = {
      {"design", "design a filter pair and print it"},
      {"epsilon-sweep", "half-shift error over a (K, L) grid"},
      {"dispersion", "renormalized dispersions 2^l e_l(k) or 2^l eps_l(k)"},
      {"phase", "relative phase of the g and h wavelet modes"},
      {"support", "momentum support of the filled mode"},
      {"energy1d", "1D energy density versus depth"},
      {"energy2d", "2D energy density versus depth"},
      {"twopoint", "MERA two-point function grid"},
      {"entropy1d", "interval entanglement entropy"},
      {"entropy2d", "box entanglement entropy of the 2D MERA"},
      {"bound", "randomized verification of the correlation bound"},
      {"circuit", "gate-layer factorization of the filter bank"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--K", cfg.K, "vanishing moments");
    sub->add_option("--L", cfg.L, "delay flatness");
    sub->add_option("--layers", layers_flag, "circuit depth or level");
    sub->add_option("--grid", cfg.grid, "momentum samples");
    sub->add_option("--range", cfg.range, "window size");
    sub->add_option("--box", cfg.box, "largest 2D box side");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--trials", cfg.trials, "randomized trials");
    sub->add_option("--Kmax", cfg.Kmax, "largest K in sweeps");
    sub->add_option("--Lmax", cfg.Lmax, "largest L in sweeps");
    sub->add_option("--curve", cfg.curve, "scaling or wavelet");
    sub->add_option("--source", cfg.source, "exact or mera");
    sub->add_option("--output,-o", cfg.output, "output path (default stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--no-cache", cfg.no_cache, "redesign filters even if stored");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidArguments;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.format = format == "json" ? Format::json : Format::csv;
  if (layers_flag != 0) cfg.layers = layers_flag;

  try {
    validate(cfg);
    if (cfg.layers && *cfg.layers < 1) throw PreconditionError("--layers must be >= 1");
    const std::map<std::string, void (*)(const RunConfig&)> dispatch = {
        {"design", run_design},       {"epsilon-sweep", run_epsilon_sweep},
        {"dispersion", run_dispersion}, {"phase", run_phase},
        {"support", run_support},     {"energy1d", run_energy1d},
        {"energy2d", run_energy2d},   {"twopoint", run_twopoint},
        {"entropy1d", run_entropy1d}, {"entropy2d", run_entropy2d},
        {"bound", run_bound},         {"circuit", run_circuit},
    };
    dispatch.at(cfg.command)(cfg);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidArguments;
  } catch (const DesignError& e) {
    std::cerr << "design infeasible: " << e.what() << '\n';
    return kDesignInfeasible;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kVerificationFailed;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
