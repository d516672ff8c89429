#include "soergel/cli.hpp"

#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <memory>

#include "CLI11.hpp"
#include "soergel/errors.hpp"

namespace soergel::cli {

namespace {

struct UsageError : Error {
  using Error::Error;
};

std::string cell_key(const Cell& c) {
  return std::to_string(c.a) + ":" + std::to_string(c.t) + ":" + std::to_string(c.d);
}

void print_table_text(std::ostream& out, const std::string& name, const PoincareTable& t) {
  out << "table " << name << " (n=" << t.n << ", D=" << t.cutoff << (t.normalized ? ", normalized" : ", raw") << ")\n";
  if (t.empty()) {
    out << "  0\n";
    return;
  }
  out << "      a      t      d    dim\n";
  for (const auto& [c, v] : t.cells()) {
    char line[64];
    std::snprintf(line, sizeof line, "  %5d  %5d  %5d  %5zu\n", c.a, c.t, c.d, v);
    out << line;
  }
}

void print_comparison_text(std::ostream& out, const Comparison& c) {
  out << (c.pass ? "PASS " : "FAIL ") << c.label;
  if (!c.detail.empty()) out << " [" << c.detail << "]";
  out << "\n";
  for (const auto& m : c.mismatches) out << "  mismatch at " << cell_key(m) << "\n";
}

nlohmann::ordered_json header(const std::string& command, const Config& cfg) {
  nlohmann::ordered_json j;
  j["schema"] = kSchema;
  j["command"] = command;
  j["conventions"] = conventions_json();
  j["n"] = cfg.n;
  j["braid"] = cfg.braid;
  return j;
}

void emit(std::ostream& out, const Config& cfg, const nlohmann::ordered_json& j, const CheckReport* r) {
  if (cfg.format == "json") {
    out << j.dump(2) << "\n";
    return;
  }
  out << kSchema << " " << j["command"].get<std::string>() << "\n";
  const auto conv = conventions_json();
  for (const auto& [k, v] : conv.items()) out << "# " << k << ": " << v.get<std::string>() << "\n";
  if (r) {
    out << "check " << r->check << ", n=" << r->n << ", D=" << r->cutoff << ", field " << r->field << "\n";
    for (const auto& [name, t] : r->tables) print_table_text(out, name, t);
    for (const auto& c : r->comparisons) print_comparison_text(out, c);
    out << "pass: " << (r->pass() ? "true" : "false") << "\n";
  }
}

// reruns over Q and records whether every table agrees with the prime-field run
void recheck_over_q(CheckReport& r, const Config& cfg, const std::function<CheckReport(const SliceRequest&)>& run_check) {
  if (!cfg.recheck_q || cfg.field == "q") return;
  SliceRequest q = cfg.request();
  q.field = FieldSpec{};
  const CheckReport exact = run_check(q);
  Comparison c;
  c.label = "tables over " + r.field + " agree with Q";
  c.pass = exact.tables.size() == r.tables.size();
  for (std::size_t i = 0; c.pass && i < r.tables.size(); ++i)
    c.pass = r.tables[i].first == exact.tables[i].first && r.tables[i].second == exact.tables[i].second;
  r.add_comparison(std::move(c));
}

int cmd_homfly(const Config& cfg, std::ostream& out) {
  const BraidWord b = parse_braid(cfg.braid, cfg.n);
  const APoly tr = homfly(b);
  auto j = header("homfly", cfg);
  j["writhe"] = b.writhe();
  nlohmann::ordered_json coeffs = nlohmann::ordered_json::object();
  for (const auto& [k, c] : tr) coeffs["a^" + std::to_string(k)] = c.to_string();
  j["trace"] = coeffs;
  j["trace_text"] = apoly_to_string(tr);
  std::string norm;
  if (cfg.normalized) {
    norm = lambda_to_string(homfly_normalized(b));
    j["normalized"] = norm;
  }
  j["pass"] = true;
  if (cfg.format == "json") {
    out << j.dump(2) << "\n";
  } else {
    emit(out, cfg, j, nullptr);
    out << "Tr(" << b.to_string() << ") = " << apoly_to_string(tr) << "\n";
    if (cfg.normalized) out << "normalized = " << norm << "\n";
  }
  return kPass;
}

int cmd_hhh(const Config& cfg, std::ostream& out) {
  const BraidWord b = parse_braid(cfg.braid, cfg.n);
  auto run_check = [&](const SliceRequest& base) {
    SliceRequest req = base;
    req.normalized = false;
    req.hochschild = -1;
    const PoincareTable raw = hhh(reduced_complex(b, req), req);
    const PoincareTable norm = normalize(raw);
    CheckReport r;
    r.check = "hhh";
    r.n = b.n;
    r.cutoff = req.cutoff;
    r.field = req.field.name();
    r.add_table(cfg.normalized ? "HHH normalized" : "HHH raw", cfg.normalized ? norm : raw);
    r.add_comparison(euler_comparison(norm, b, req.cutoff));
    return r;
  };
  CheckReport r = run_check(cfg.request());
  recheck_over_q(r, cfg, run_check);
  auto j = header("hhh", cfg);
  const auto rj = report_json(r);
  for (const auto& [k, v] : rj.items()) j[k] = v;
  j["euler_check"] = r.comparisons.front().pass;
  emit(out, cfg, j, &r);
  return r.pass() ? kPass : kCellFailure;
}

int cmd_verify(const Config& cfg, const std::string& check, const std::string& word, int samples, unsigned seed,
               std::ostream& out) {
  const auto& names = check_names();
  if (std::find(names.begin(), names.end(), check) == names.end()) throw UnknownCheck("unknown check '" + check + "'");
  std::function<CheckReport(const SliceRequest&)> run_check;
  if (check == "serre") {
    const BraidWord b = parse_braid(cfg.braid, cfg.n);
    run_check = [b](const SliceRequest& q) { return check_serre(b, q); };
  } else if (check == "kalman-cat") {
    const BraidWord b = parse_braid(cfg.braid, cfg.n);
    run_check = [b](const SliceRequest& q) { return check_kalman_cat(b, q); };
  } else if (check == "relative-serre") {
    const BraidWord b = parse_braid(cfg.braid, cfg.n);
    run_check = [b](const SliceRequest& q) {
      return check_relative_serre(reduced_complex(b, q), "F(" + b.to_string() + ")", q);
    };
  } else if (check == "lw") {
    run_check = [n = cfg.n](const SliceRequest& q) { return check_lw(n, q); };
  } else if (check == "bruhat") {
    run_check = [n = cfg.n](const SliceRequest& q) { return check_bruhat(n, q); };
  } else if (check == "duality") {
    if (!word.empty() && !cfg.braid.empty()) throw UsageError("duality takes either --word or --braid, not both");
    if (!cfg.braid.empty()) {
      const BraidWord b = parse_braid(cfg.braid, cfg.n);
      run_check = [b](const SliceRequest& q) { return check_hh_duality_complex(b, q); };
    } else {
      const BraidWord w = parse_braid(word, cfg.n);
      std::vector<int> idx;
      for (int l : w.letters) {
        if (l < 0) throw UsageError("a Bott-Samelson word has positive letters only");
        idx.push_back(l);
      }
      const BSBimodule m(cfg.n, idx);
      run_check = [m](const SliceRequest& q) { return check_hh_duality(m, q); };
    }
  } else if (check == "markov") {
    const BraidWord b = parse_braid(cfg.braid, cfg.n);
    run_check = [b](const SliceRequest& q) { return check_markov(b, q); };
  } else {
    if (samples < 0) throw UsageError("--samples must be >= 0");
    run_check = [n = cfg.n, samples, seed](const SliceRequest&) { return check_kalman_decat(n, samples, seed); };
  }
  CheckReport r = run_check(cfg.request());
  if (check != "kalman-decat") recheck_over_q(r, cfg, run_check);
  auto j = header("verify " + check, cfg);
  const auto rj = report_json(r);
  for (const auto& [k, v] : rj.items()) j[k] = v;
  emit(out, cfg, j, &r);
  return r.pass() ? kPass : kCellFailure;
}

}  // namespace

void Config::validate() const {
  if (n < 1) throw UsageError("-n must be >= 1");
  if (cutoff < 0 || cutoff % 2 != 0) throw UsageError("cutoff D must be even and >= 0, got " + std::to_string(cutoff));
  if (threads < 1) throw UsageError("--threads must be >= 1");
  if (format != "json" && format != "table") throw UsageError("--format must be json or table");
  try {
    FieldSpec::parse(field);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

SliceRequest Config::request() const {
  SliceRequest r;
  r.cutoff = cutoff;
  r.field = FieldSpec::parse(field);
  r.threads = threads;
  r.cache_dir = cache_dir;
  return r;
}

nlohmann::ordered_json conventions_json() {
  nlohmann::ordered_json c;
  c["grading"] = "deg x_j = 2, M(s)_d = M_{d+s}";
  c["cells"] = "a:t:d counts a^a t^t q^d, q^d <-> internal degree d";
  c["v_q"] = "v = q^-1, so the shift (1) multiplies graded dimensions by v; Hecke parameter v^-2 = q^2";
  c["hochschild"] = "raw HH^k has theta of degree -2; normalized tables report HH^k(-2k)";
  c["cutoff"] = "tables exact for d <= cutoff";
  return c;
}

nlohmann::ordered_json table_json(const PoincareTable& t) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [c, v] : t.cells()) j[cell_key(c)] = v;
  return j;
}

nlohmann::ordered_json comparison_json(const Comparison& c) {
  nlohmann::ordered_json j;
  j["label"] = c.label;
  j["pass"] = c.pass;
  j["detail"] = c.detail;
  nlohmann::ordered_json mm = nlohmann::ordered_json::array();
  for (const auto& m : c.mismatches) mm.push_back(cell_key(m));
  j["mismatches"] = mm;
  return j;
}

nlohmann::ordered_json report_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["check"] = r.check;
  j["cutoff"] = r.cutoff;
  j["field"] = r.field;
  nlohmann::ordered_json tables = nlohmann::ordered_json::object();
  for (const auto& [name, t] : r.tables) {
    nlohmann::ordered_json tj;
    tj["n"] = t.n;
    tj["normalized"] = t.normalized;
    tj["cells"] = table_json(t);
    tables[name] = tj;
  }
  j["tables"] = tables;
  nlohmann::ordered_json cs = nlohmann::ordered_json::array();
  for (const auto& c : r.comparisons) cs.push_back(comparison_json(c));
  j["comparisons"] = cs;
  j["pass"] = r.pass();
  return j;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {"serre", "kalman-cat", "relative-serre", "lw",
                                                 "bruhat", "duality", "markov", "kalman-decat"};
  return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Soergel bimodule toolkit: HOMFLY traces, triply graded homology and duality checks"};
  app.require_subcommand(1);
  Config cfg;
  if (const char* env = std::getenv("SOERGEL_KIT_CACHE")) cfg.cache_dir = env;
  std::string positional_braid;
  std::string check;
  std::string word;
  int samples = 20;
  unsigned seed = 1;

  auto common = [&](CLI::App* sub, bool slices) {
    sub->add_option("-n", cfg.n, "number of strands");
    sub->add_option("--braid", cfg.braid, "braid word, e.g. \"1 2 -1\"");
    sub->add_option("--format", cfg.format, "json or table")->check(CLI::IsMember({"json", "table"}));
    if (!slices) return;
    sub->add_option("-D,--cutoff", cfg.cutoff, "internal degree cutoff (even)");
    sub->add_option("--field", cfg.field, "q or fp:PRIME");
    sub->add_option("--threads", cfg.threads, "worker threads over internal degrees");
    sub->add_option("--cache-dir", cfg.cache_dir, "cache for reduced complexes (default $SOERGEL_KIT_CACHE)");
    sub->add_flag("--recheck-q", cfg.recheck_q, "with fp:PRIME, rerun over Q and compare");
  };

  auto* homfly_cmd = app.add_subcommand("homfly", "Jones-Ocneanu trace of a braid");
  common(homfly_cmd, false);
  homfly_cmd->add_option("word", positional_braid, "braid word (alternative to --braid)");
  homfly_cmd->add_flag("--normalized", cfg.normalized, "also print the Markov-invariant normalization");

  auto* hhh_cmd = app.add_subcommand("hhh", "triply graded homology table with Euler check");
  common(hhh_cmd, true);
  hhh_cmd->add_option("word", positional_braid, "braid word (alternative to --braid)");
  hhh_cmd->add_flag("--normalized", cfg.normalized, "report HH^k(-2k) instead of raw HH^k");

  auto* verify_cmd = app.add_subcommand("verify", "run a duality check");
  common(verify_cmd, true);
  verify_cmd->add_option("check", check, "serre | kalman-cat | relative-serre | lw | bruhat | duality | markov | kalman-decat")
      ->required();
  verify_cmd->add_option("--word", word, "Bott-Samelson word for duality, e.g. \"1 2\"");
  verify_cmd->add_option("--samples", samples, "random Hecke elements for kalman-decat");
  verify_cmd->add_option("--seed", seed, "seed for kalman-decat");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (!positional_braid.empty()) {
      if (!cfg.braid.empty()) throw UsageError("give the braid either positionally or with --braid");
      cfg.braid = positional_braid;
    }
    cfg.validate();
    if (*homfly_cmd) return cmd_homfly(cfg, out);
    if (*hhh_cmd) return cmd_hhh(cfg, out);
    return cmd_verify(cfg, check, word, samples, seed, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownCheck& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const CutoffTooLow& e) {
    err << "cutoff too low: " << e.what() << "\n";
    return kUsage;
  } catch (const StrandMismatch& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal invariant violation: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace soergel::cli
