// eschlab: classification and zero-curvature certification for Eschenburg
// spaces SU(3)//S^1 under the deformed (Eschenburg) and doubled (Wilking)
// metrics.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "eschlab/eschenburg.hpp"
#include "eschlab/json_io.hpp"
#include "eschlab/verify.hpp"
#include "eschlab/version.hpp"
#include "eschlab/wilking.hpp"

namespace {

using esch::Json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitSuiteFailure = 3;

struct RunConfig {
  std::uint64_t seed = esch::kDefaultSeed;
  int samples = 1000;
  double t = 1.0;
  std::string format = "text";  // text | json | csv
  std::string out_path;
  std::string config_path;
  double tol_horizontality = esch::kHorizontalityTol;
  double tol_bracket = esch::kBracketTol;
  double tol_curvature = esch::kZeroCurvatureTol;
};

Json meta_json(const RunConfig& cfg) {
  Json meta;
  meta["tool"] = "eschlab";
  meta["version"] = esch::kVersion;
  meta["seed"] = cfg.seed;
  meta["samples"] = cfg.samples;
  meta["t"] = cfg.t;
  meta["tolerances"] = Json{{"horizontality", cfg.tol_horizontality},
                            {"bracket", cfg.tol_bracket},
                            {"curvature", cfg.tol_curvature}};
  return meta;
}

esch::Triple parse_triple(const std::string& text) {
  esch::Triple out{};
  std::string s = text;
  for (char& c : s) {
    if (c == '(' || c == ')' || c == ' ') c = ',';
  }
  std::istringstream is(s);
  std::string tok;
  int idx = 0;
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) continue;
    if (idx >= 3) throw CLI::ValidationError("triple", "expected exactly three integers");
    std::size_t pos = 0;
    out[idx++] = std::stoll(tok, &pos);
    if (pos != tok.size()) throw CLI::ValidationError("triple", "bad integer: " + tok);
  }
  if (idx != 3) throw CLI::ValidationError("triple", "expected exactly three integers");
  return out;
}

// key=value lines; '#' starts a comment.  Flags take precedence, so the file
// is applied as defaults before the command line is parsed.
void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "samples") cfg.samples = std::stoi(value);
    else if (key == "t") cfg.t = std::stod(value);
    else if (key == "format") cfg.format = value;
    else if (key == "tol_horizontality") cfg.tol_horizontality = std::stod(value);
    else if (key == "tol_bracket") cfg.tol_bracket = std::stod(value);
    else if (key == "tol_curvature") cfg.tol_curvature = std::stod(value);
    else throw CLI::ValidationError("--config", "unknown key: " + key);
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw esch::Error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit(const RunConfig& cfg, const Json& doc) {
  Output out(cfg.out_path);
  out.stream() << doc.dump(2) << "\n";
}

int cmd_classify(const RunConfig& cfg, const esch::Triple& p, const esch::Triple& q) {
  const esch::PQPair pair = esch::PQPair::make(p, q);
  if (!esch::is_admissible(pair)) {
    std::cerr << "not admissible: some gcd(p_sigma(1)-q1, p_sigma(2)-q2) != 1 for " << pair.str()
              << "\n";
    return kExitDomain;
  }
  Json doc;
  doc["meta"] = meta_json(cfg);
  doc["p"] = esch::to_json(pair.p);
  doc["q"] = esch::to_json(pair.q);
  doc["admissible"] = true;
  Json prods = Json::array();
  for (__int128 v : esch::six_products(pair)) prods.push_back(esch::product_as_int64(v));
  doc["products"] = prods;
  const esch::CurvatureClass cls = esch::classify(pair);
  doc["class"] = esch::to_string(cls);
  doc["eschenburg_positive"] = esch::eschenburg_positive(pair);
  const esch::PQPair ce = esch::canonical_form(pair, esch::MoveSet::EschenburgIsometries);
  const esch::PQPair cw = esch::canonical_form(pair, esch::MoveSet::WilkingIsometries);
  const esch::PQPair ca = esch::canonical_form(pair, esch::MoveSet::AllDiffeos);
  doc["canonical"] = Json{{"eschenburg_isometries", esch::to_json(ce)},
                          {"wilking_isometries", esch::to_json(cw)},
                          {"all_diffeos", esch::to_json(ca)}};
  doc["orbit_sizes"] =
      Json{{"eschenburg_isometries", esch::orbit(pair, esch::MoveSet::EschenburgIsometries).size()},
           {"wilking_isometries", esch::orbit(pair, esch::MoveSet::WilkingIsometries).size()},
           {"all_diffeos", esch::orbit(pair, esch::MoveSet::AllDiffeos).size()}};
  doc["exceptional"] = esch::is_exceptional(pair);

  if (cfg.format == "json" || cfg.format == "csv") {
    emit(cfg, doc);
  } else {
    Output out(cfg.out_path);
    auto& os = out.stream();
    os << "pair: " << pair.str() << "\n";
    os << "admissible: true\n";
    os << "products[id,(12),(13),(23),(123),(132)]:";
    for (const auto& v : doc["products"]) os << " " << v;
    os << "\n";
    os << "class: " << esch::to_string(cls) << "\n";
    os << "eschenburg_positive: " << (doc["eschenburg_positive"].get<bool>() ? "true" : "false")
       << "\n";
    os << "canonical(all diffeos): " << ca.str() << "\n";
    os << "exceptional: " << (doc["exceptional"].get<bool>() ? "true" : "false") << "\n";
  }
  return kExitOk;
}

int cmd_enumerate(const RunConfig& cfg, esch::Int max_abs, const std::string& filter,
                  bool canonical_only) {
  if (max_abs < 0 || max_abs > 8) {
    throw CLI::ValidationError("--max-abs", "must be between 0 and 8");
  }
  Output out(cfg.out_path);
  auto& os = out.stream();

  std::map<esch::Int, std::vector<esch::Triple>> by_sum;
  for (esch::Int a = -max_abs; a <= max_abs; ++a) {
    for (esch::Int b = -max_abs; b <= max_abs; ++b) {
      for (esch::Int c = -max_abs; c <= max_abs; ++c) by_sum[a + b + c].push_back({a, b, c});
    }
  }

  long admissible = 0;
  std::map<std::string, long> class_counts;
  for (const auto& [sum, ps] : by_sum) {
    for (const esch::Triple& p : ps) {
      for (const esch::Triple& q : by_sum.at(sum)) {
        const esch::PQPair pair{p, q};
        if (!esch::is_admissible(pair)) continue;
        ++admissible;
        const esch::CurvatureClass cls = esch::classify(pair);
        ++class_counts[esch::to_string(cls)];
        if (!filter.empty() && filter != esch::to_string(cls)) continue;
        if (canonical_only && esch::canonical_form(pair, esch::MoveSet::AllDiffeos) != pair) {
          continue;
        }
        os << esch::catalog_line(pair).dump() << "\n";
      }
    }
  }
  Json summary;
  summary["summary"] = Json{{"meta", meta_json(cfg)},
                            {"max_abs", max_abs},
                            {"admissible", admissible},
                            {"classes", class_counts}};
  os << summary.dump() << "\n";
  return kExitOk;
}

int cmd_scan_esch(const RunConfig& cfg, const esch::Triple& p, const esch::Triple& q) {
  const esch::PQPair pair = esch::PQPair::make(p, q);
  const esch::CaseVerdictReport rep = esch::verify_case(pair, cfg.samples, cfg.seed, cfg.t);
  Json doc;
  doc["meta"] = meta_json(cfg);
  doc["report"] = esch::to_json(rep);
  if (cfg.format == "text") {
    Output out(cfg.out_path);
    auto& os = out.stream();
    os << "pair: " << pair.str() << "  class: " << esch::to_string(rep.curvature_class) << "\n";
    os << "certificate_fraction: " << esch::fmt17(rep.certificate_fraction) << "\n";
    os << "min |H_A eigenvalue|: " << esch::fmt17(rep.min_abs_eigen) << "\n";
    if (rep.diagonal_check_applicable) {
      os << "diagonal certificate fraction: " << esch::fmt17(rep.diagonal_certificate_fraction)
         << "\n";
    }
    if (rep.open_set_check_applicable) {
      os << "open-set U certificate fraction: "
         << esch::fmt17(rep.open_set_certificate_fraction) << "\n";
    }
    if (rep.negcase_applicable) {
      os << "negative-case: " << rep.negcase
         << ", explicit-k pass fraction: " << esch::fmt17(rep.explicit_k_pass_fraction) << "\n";
    }
    os << "pass: " << (rep.pass ? "true" : "false") << "\n";
  } else {
    emit(cfg, doc);
  }
  return rep.pass ? kExitOk : kExitSuiteFailure;
}

int cmd_wilking(const RunConfig& cfg, const esch::Triple& q, const std::string& mode,
                double theta_lo, double theta_hi, int grid) {
  if (mode == "analyze") {
    const esch::CandidateReport rep = esch::wilking_candidate_filter(q);
    Json doc;
    doc["meta"] = meta_json(cfg);
    doc["report"] = esch::to_json(rep);
    if (rep.verdict == esch::CandidateVerdict::NewCandidate) {
      doc["report"]["construction_case"] = esch::to_string(esch::almpos_routing(rep.normalized_q));
    }
    emit(cfg, doc);
    return kExitOk;
  }
  if (mode == "certify") {
    const esch::AlmposResult res = esch::almpos_case_engine(q, cfg.t);
    Json doc;
    doc["meta"] = meta_json(cfg);
    doc["result"] = esch::to_json(res);
    emit(cfg, doc);
    return kExitOk;
  }
  if (mode == "sweep") {
    Output out(cfg.out_path);
    auto& os = out.stream();
    os << "# eschlab " << esch::kVersion << " seed=" << cfg.seed << " t=" << esch::fmt17(cfg.t)
       << " q=" << q[0] << "," << q[1] << "," << q[2] << "\n";
    os << "theta,h,g,beta,h_prime,g_prime,domain_ok,flag\n";
    for (int i = 0; i < grid; ++i) {
      const double theta = theta_lo + (theta_hi - theta_lo) * (i + 0.5) / grid;
      try {
        const esch::HGValues v = esch::hg_values(theta, q);
        os << esch::fmt17(theta) << "," << esch::fmt17(v.h) << "," << esch::fmt17(v.g) << ","
           << esch::fmt17(v.beta) << "," << esch::fmt17(v.h_prime) << ","
           << esch::fmt17(v.g_prime) << ",1,\n";
      } catch (const esch::DomainError& e) {
        os << esch::fmt17(theta) << ",,,,,,0," << e.what() << "\n";
      }
    }
    return kExitOk;
  }
  throw CLI::ValidationError("--mode", "expected analyze, certify or sweep");
}

int cmd_verify_paper(const RunConfig& cfg, const std::string& level_name) {
  const esch::VerifyLevel level =
      level_name == "full" ? esch::VerifyLevel::Full : esch::VerifyLevel::Fast;
  esch::VerifyTolerances tol;
  tol.zero_curvature = cfg.tol_curvature;
  const esch::VerifyReport report = esch::run_verification(level, cfg.seed, tol);
  if (cfg.format == "json") {
    Json doc;
    doc["meta"] = meta_json(cfg);
    doc["report"] = esch::to_json(report);
    emit(cfg, doc);
  } else {
    Output out(cfg.out_path);
    out.stream() << esch::render_text(report);
  }
  return report.all_pass() ? kExitOk : kExitSuiteFailure;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  if (const char* env_seed = std::getenv("ESCHLAB_SEED")) {
    cfg.seed = std::strtoull(env_seed, nullptr, 0);
  }

  // The config file provides defaults below environment and flags, so scan
  // for --config before the real parse.
  for (int i = 1; i + 1 <= argc - 1; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        load_config_file(argv[i + 1], cfg);
      } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
      }
      if (const char* env_seed = std::getenv("ESCHLAB_SEED")) {
        cfg.seed = std::strtoull(env_seed, nullptr, 0);
      }
    }
  }

  CLI::App app{"curvature classification and zero-plane certificates for Eschenburg spaces"};
  app.set_version_flag("--version", esch::kVersion);
  app.add_option("--seed", cfg.seed, "random seed (also ESCHLAB_SEED)");
  app.add_option("--samples", cfg.samples, "sample count for scans");
  app.add_option("--t", cfg.t, "Cheeger deformation parameter");
  app.add_option("--format", cfg.format, "output format: text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", cfg.out_path, "write output to this file instead of stdout");
  app.add_option("--config", cfg.config_path, "key=value config file");
  app.add_option("--tol-horizontality", cfg.tol_horizontality, "horizontality tolerance");
  app.add_option("--tol-bracket", cfg.tol_bracket, "bracket residual tolerance");
  app.add_option("--tol-curvature", cfg.tol_curvature, "zero-curvature tolerance");
  app.require_subcommand(1);

  std::string p_text, q_text;
  auto* classify_cmd = app.add_subcommand("classify", "classify a weight pair (p, q)");
  classify_cmd->add_option("--p", p_text, "comma-separated triple")->required();
  classify_cmd->add_option("--q", q_text, "comma-separated triple")->required();

  esch::Int max_abs = 2;
  std::string filter;
  bool canonical_only = false;
  auto* enum_cmd = app.add_subcommand("enumerate", "catalog admissible pairs up to a bound");
  enum_cmd->add_option("--max-abs", max_abs, "entry magnitude bound")->required();
  enum_cmd->add_option("--filter", filter, "restrict to one curvature class")
      ->check(CLI::IsMember({"PositivelyCurved", "AlmostPositive", "QuasiPositive",
                             "FlatPlaneEverywhere"}));
  enum_cmd->add_flag("--canonical-only", canonical_only, "emit only orbit representatives");

  auto* scan_cmd = app.add_subcommand("scan-esch", "sampled zero-plane scan for the deformed metric");
  scan_cmd->add_option("--p", p_text, "comma-separated triple")->required();
  scan_cmd->add_option("--q", q_text, "comma-separated triple")->required();

  std::string wq_text, mode = "analyze";
  double theta_lo = 0.01, theta_hi = M_PI / 2.0 - 0.01;
  int grid = 200;
  auto* wil_cmd = app.add_subcommand("wilking", "doubled-metric candidate analysis");
  wil_cmd->add_option("--q", wq_text, "comma-separated weight triple")->required();
  wil_cmd->add_option("--mode", mode, "analyze, certify or sweep")
      ->check(CLI::IsMember({"analyze", "certify", "sweep"}));
  wil_cmd->add_option("--theta-lo", theta_lo, "sweep window start");
  wil_cmd->add_option("--theta-hi", theta_hi, "sweep window end");
  wil_cmd->add_option("--grid", grid, "sweep grid size");

  std::string level = "fast";
  auto* verify_cmd = app.add_subcommand("verify-paper", "run the cross-validation suite");
  verify_cmd->add_option("--level", level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (classify_cmd->parsed()) {
      return cmd_classify(cfg, parse_triple(p_text), parse_triple(q_text));
    }
    if (enum_cmd->parsed()) {
      return cmd_enumerate(cfg, max_abs, filter, canonical_only);
    }
    if (scan_cmd->parsed()) {
      return cmd_scan_esch(cfg, parse_triple(p_text), parse_triple(q_text));
    }
    if (wil_cmd->parsed()) {
      return cmd_wilking(cfg, parse_triple(wq_text), mode, theta_lo, theta_hi, grid);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify_paper(cfg, level);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const esch::DomainRejection& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return kExitDomain;
  } catch (const esch::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
