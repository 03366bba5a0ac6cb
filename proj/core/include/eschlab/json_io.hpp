#pragma once

#include <nlohmann/json.hpp>

#include "eschlab/curvature.hpp"
#include "eschlab/eschenburg.hpp"
#include "eschlab/su3.hpp"
#include "eschlab/triples.hpp"
#include "eschlab/wilking.hpp"

namespace esch {

// ordered_json keeps key insertion order, so identical inputs dump to
// identical bytes.
using Json = nlohmann::ordered_json;

// Matrices serialize as row-major arrays of [re, im] pairs.
Json matrix_json(const Mat3& m);
Json matrix_json(const Mat2& m);
Mat3 mat3_from_json(const Json& j);

Json to_json(const Su3Vector& x);
Json to_json(const SU3Point& a);
Json to_json(const KElement& k);
Json to_json(const ZVector& z);

Json to_json(const Triple& t);
Json to_json(const PQPair& pair);
PQPair pqpair_from_json(const Json& j);

Json to_json(const Move& m);
Json to_json(const std::vector<Move>& moves);

// One catalog line: p, q, admissible, class, products, canonical_p,
// canonical_q.
Json catalog_line(const PQPair& pair);

Json to_json(const TwoPlane& plane);
Json to_json(const MinCurvatureResult& res);

Json to_json(const HorizontalityReport& rep);
Json to_json(const ZeroPlaneCertificate& cert);
Json to_json(const CaseVerdictReport& rep);
Json to_json(const CandidateReport& rep);
Json to_json(const WilkingCertificate& cert);
Json to_json(const OpenSetV& v);
Json to_json(const AlmposResult& res);

// 17 significant digits, '.' decimal separator; replayable in CSV output.
std::string fmt17(double v);

}  // namespace esch
