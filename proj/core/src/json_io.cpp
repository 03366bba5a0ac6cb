#include "eschlab/json_io.hpp"

#include <cstdio>

namespace esch {

Json matrix_json(const Mat3& m) {
  Json out = Json::array();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return out;
}

Json matrix_json(const Mat2& m) {
  Json out = Json::array();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return out;
}

Mat3 mat3_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 9) {
    throw InvalidParameter("matrix json: expected 9 [re,im] pairs");
  }
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      const Json& e = j[3 * i + k];
      m(i, k) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

Json to_json(const Su3Vector& x) { return matrix_json(x.m); }
Json to_json(const SU3Point& a) { return matrix_json(a.m); }
Json to_json(const KElement& k) { return matrix_json(k.m); }

Json to_json(const ZVector& z) {
  return Json{{"beta", z.beta}, {"z", {z.z.real(), z.z.imag()}}};
}

Json to_json(const Triple& t) { return Json{t[0], t[1], t[2]}; }

Json to_json(const PQPair& pair) {
  return Json{{"p", to_json(pair.p)}, {"q", to_json(pair.q)}};
}

PQPair pqpair_from_json(const Json& j) {
  Triple p{}, q{};
  for (int i = 0; i < 3; ++i) {
    p[i] = j.at("p").at(i).get<Int>();
    q[i] = j.at("q").at(i).get<Int>();
  }
  return PQPair::make(p, q);
}

Json to_json(const Move& m) {
  Json out{{"move", ""}};
  switch (m.kind) {
    case Move::Kind::Shift:
      out["move"] = "Shift";
      out["m"] = m.amount;
      break;
    case Move::Kind::Negate:
      out["move"] = "Negate";
      break;
    case Move::Kind::PermP:
      out["move"] = "PermP";
      out["sigma"] = {m.perm[0] + 1, m.perm[1] + 1, m.perm[2] + 1};
      break;
    case Move::Kind::PermQ:
      out["move"] = "PermQ";
      out["sigma"] = {m.perm[0] + 1, m.perm[1] + 1, m.perm[2] + 1};
      break;
    case Move::Kind::SwapPQ:
      out["move"] = "SwapPQ";
      break;
  }
  out["index"] = m.index();
  return out;
}

Json to_json(const std::vector<Move>& moves) {
  Json out = Json::array();
  for (const Move& m : moves) out.push_back(to_json(m));
  return out;
}

Json catalog_line(const PQPair& pair) {
  Json line;
  line["p"] = to_json(pair.p);
  line["q"] = to_json(pair.q);
  const bool adm = is_admissible(pair);
  line["admissible"] = adm;
  if (adm) {
    line["class"] = to_string(classify(pair));
    Json prods = Json::array();
    for (__int128 v : six_products(pair)) prods.push_back(product_as_int64(v));
    line["products"] = prods;
    const PQPair canon = canonical_form(pair, MoveSet::AllDiffeos);
    line["canonical_p"] = to_json(canon.p);
    line["canonical_q"] = to_json(canon.q);
  }
  return line;
}

Json to_json(const TwoPlane& plane) {
  return Json{{"X", to_json(plane.X)}, {"Y", to_json(plane.Y)}, {"base", to_json(plane.base)}};
}

Json to_json(const MinCurvatureResult& res) {
  return Json{{"min_value", res.min_value},
              {"seed", res.seed},
              {"restarts", res.restarts},
              {"iterations", res.total_iterations},
              {"argmin", to_json(res.argmin)}};
}

Json to_json(const HorizontalityReport& rep) {
  Json out;
  out["A"] = to_json(rep.A);
  out["y3_horizontality_residual"] = rep.diagonal_residual;
  out["hermitian_form"] = matrix_json(rep.hermitian);
  out["eigen_min"] = rep.eigen_min;
  out["eigen_max"] = rep.eigen_max;
  out["y1_solvable"] = rep.y1_solvable;
  if (rep.witness_k) out["witness_k"] = to_json(*rep.witness_k);
  return out;
}

Json to_json(const ZeroPlaneCertificate& cert) {
  Json out;
  out["A"] = to_json(cert.A);
  out["pair"] = to_json(cert.pair);
  out["t"] = cert.t;
  out["kind"] = cert.kind == ZeroPlaneCertificate::Kind::ViaY3 ? "ViaY3" : "ViaAdkY1";
  out["k"] = cert.k ? to_json(*cert.k) : Json(nullptr);
  out["X"] = to_json(cert.companion);
  out["residuals"] = Json{{"horizontality_primary", cert.residuals.horizontality_primary},
                          {"horizontality_companion", cert.residuals.horizontality_companion},
                          {"bracket_full", cert.residuals.bracket_full},
                          {"bracket_k", cert.residuals.bracket_k},
                          {"curvature", cert.residuals.curvature}};
  return out;
}

Json to_json(const CaseVerdictReport& rep) {
  Json out;
  out["pair"] = to_json(rep.pair);
  out["class"] = to_string(rep.curvature_class);
  out["samples"] = rep.samples;
  out["seed"] = rep.seed;
  out["t"] = rep.t;
  out["certificate_fraction"] = rep.certificate_fraction;
  out["min_abs_eigen"] = rep.min_abs_eigen;
  out["max_certificate_residual"] = rep.max_invalid_residual;
  if (rep.diagonal_check_applicable) {
    out["diagonal"] = Json{{"samples", rep.diagonal_samples},
                           {"certificate_fraction", rep.diagonal_certificate_fraction},
                           {"normalization", to_json(rep.diagonal_normalization)}};
  }
  if (rep.open_set_check_applicable) {
    out["open_set_U"] = Json{{"samples", rep.open_set_samples},
                             {"certificate_fraction", rep.open_set_certificate_fraction},
                             {"normalization", to_json(rep.open_set_normalization)}};
  }
  if (rep.negcase_applicable) {
    out["negcase"] = rep.negcase;
    out["explicit_k"] = Json{{"samples", rep.explicit_k_samples},
                             {"pass_fraction", rep.explicit_k_pass_fraction}};
  }
  out["pass"] = rep.pass;
  if (!rep.notes.empty()) out["notes"] = rep.notes;
  return out;
}

Json to_json(const CandidateReport& rep) {
  Json out;
  out["verdict"] = to_string(rep.verdict);
  out["normalized_q"] = to_json(rep.normalized_q);
  out["normalization"] = to_json(rep.normalization);
  if (rep.verdict == CandidateVerdict::NewCandidate) {
    Json sub = Json::array();
    if (rep.subcase_2a) sub.push_back("2a");
    if (rep.subcase_2b) sub.push_back("2b");
    if (rep.subcase_2c) sub.push_back("2c");
    out["subcases"] = sub;
  }
  return out;
}

Json to_json(const WilkingCertificate& cert) {
  Json out;
  out["q"] = to_json(cert.q);
  out["t"] = cert.t;
  out["theta"] = cert.theta;
  out["alpha"] = cert.alpha;
  out["gamma"] = cert.gamma;
  out["beta"] = cert.beta;
  out["k"] = to_json(cert.k);
  out["Z"] = to_json(cert.Z);
  out["residuals"] = Json{{"A", cert.residuals.cond_A},
                          {"B", cert.residuals.cond_B},
                          {"C", cert.residuals.cond_C_equality},
                          {"C_det", cert.residuals.cond_C_det},
                          {"horizontality_y1", cert.residuals.horizontality_y1},
                          {"horizontality_z", cert.residuals.horizontality_z},
                          {"beta_identities", cert.residuals.beta_identities}};
  out["curvatures"] = {cert.curvatures[0], cert.curvatures[1]};
  return out;
}

Json to_json(const OpenSetV& v) {
  return Json{{"q", to_json(v.q)},
              {"theta_lo", v.theta_lo},
              {"theta_hi", v.theta_hi},
              {"theta0", v.theta0}};
}

Json to_json(const AlmposResult& res) {
  Json out;
  out["filter"] = to_json(res.filter);
  out["q"] = to_json(res.q);
  out["case"] = to_string(res.engine_case);
  out["theta0"] = res.theta0;
  out["theta_witness"] = res.theta_witness;
  out["alpha_witness"] = res.alpha_witness;
  out["hg"] = Json{{"theta", res.hg.theta}, {"h", res.hg.h},         {"g", res.hg.g},
                   {"beta", res.hg.beta},   {"h_prime", res.hg.h_prime},
                   {"g_prime", res.hg.g_prime}};
  out["certificate"] = to_json(res.certificate);
  out["V"] = to_json(res.V);
  return out;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace esch
