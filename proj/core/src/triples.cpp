#include "eschlab/triples.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace esch {

namespace {

Int checked_entry(__int128 v, const char* what) {
  if (v >= kMaxEntryMagnitude || v <= -kMaxEntryMagnitude) {
    throw Overflow(std::string(what) + ": entry magnitude exceeds 2^62");
  }
  return static_cast<Int>(v);
}

Int gcd_abs(Int a, Int b) {
  // gcd of absolute values with gcd(0,0) = 0, so the fully degenerate
  // difference pattern is never admissible.
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

std::string triple_str(const Triple& t) {
  std::ostringstream os;
  os << "(" << t[0] << "," << t[1] << "," << t[2] << ")";
  return os.str();
}

}  // namespace

PQPair PQPair::make(const Triple& p, const Triple& q) {
  for (int i = 0; i < 3; ++i) {
    checked_entry(p[i], "PQPair");
    checked_entry(q[i], "PQPair");
  }
  const __int128 sp = __int128(p[0]) + p[1] + p[2];
  const __int128 sq = __int128(q[0]) + q[1] + q[2];
  if (sp != sq) {
    throw InvalidParameter("PQPair: sum(p) != sum(q) for p=" + triple_str(p) +
                           " q=" + triple_str(q));
  }
  return PQPair{p, q};
}

std::string PQPair::str() const {
  return "(p=" + triple_str(p) + ", q=" + triple_str(q) + ")";
}

const char* to_string(CurvatureClass c) {
  switch (c) {
    case CurvatureClass::PositivelyCurved: return "PositivelyCurved";
    case CurvatureClass::AlmostPositive: return "AlmostPositive";
    case CurvatureClass::QuasiPositive: return "QuasiPositive";
    case CurvatureClass::FlatPlaneEverywhere: return "FlatPlaneEverywhere";
  }
  return "?";
}

const char* to_string(CandidateVerdict v) {
  switch (v) {
    case CandidateVerdict::KnownPositive: return "KnownPositive";
    case CandidateVerdict::KnownAlmostPositiveHomogeneous: return "KnownAlmostPositiveHomogeneous";
    case CandidateVerdict::KnownAlmostPositiveCohomOne: return "KnownAlmostPositiveCohomOne";
    case CandidateVerdict::NewCandidate: return "NewCandidate";
  }
  return "?";
}

bool perm_fixes_last(const Perm& s) { return s[2] == 2; }

Perm perm_inverse(const Perm& s) {
  Perm inv{};
  for (int i = 0; i < 3; ++i) inv[s[i]] = i;
  return inv;
}

SixProducts six_products(const PQPair& pair) {
  SixProducts out{};
  for (std::size_t i = 0; i < kAllPerms.size(); ++i) {
    const Perm& s = kAllPerms[i];
    const __int128 a = __int128(pair.p[s[0]]) - pair.q[0];
    const __int128 b = __int128(pair.p[s[1]]) - pair.q[1];
    out[i] = a * b;
  }
  return out;
}

std::string int128_str(__int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
  std::string s;
  while (u > 0) {
    s.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

Int product_as_int64(__int128 v) {
  if (v > std::numeric_limits<Int>::max() || v < std::numeric_limits<Int>::min()) {
    throw Overflow("six-product does not fit in 64 bits: " + int128_str(v));
  }
  return static_cast<Int>(v);
}

bool is_admissible(const PQPair& pair) {
  for (const Perm& s : kAllPerms) {
    const Int a = pair.p[s[0]] - pair.q[0];
    const Int b = pair.p[s[1]] - pair.q[1];
    if (gcd_abs(a, b) != 1) return false;
  }
  return true;
}

CurvatureClass classify(const PQPair& pair) {
  if (!is_admissible(pair)) {
    throw NotAdmissible("classify: pair is not admissible " + pair.str());
  }
  const SixProducts prod = six_products(pair);
  bool any_pos = false, any_neg = false, any_zero = false;
  for (__int128 v : prod) {
    any_pos |= v > 0;
    any_neg |= v < 0;
    any_zero |= v == 0;
  }
  if (any_pos && !any_neg && !any_zero) return CurvatureClass::PositivelyCurved;
  if (any_pos && any_neg) return CurvatureClass::QuasiPositive;
  if (any_pos && any_zero && !any_neg) return CurvatureClass::AlmostPositive;
  return CurvatureClass::FlatPlaneEverywhere;
}

bool eschenburg_positive(const PQPair& pair) {
  if (!is_admissible(pair)) {
    throw NotAdmissible("eschenburg_positive: pair is not admissible " + pair.str());
  }
  const Int lo = std::min({pair.p[0], pair.p[1], pair.p[2]});
  const Int hi = std::max({pair.p[0], pair.p[1], pair.p[2]});
  for (Int qi : pair.q) {
    if (qi >= lo && qi <= hi) return false;
  }
  return true;
}

int Move::index() const {
  switch (kind) {
    case Kind::Shift: return 1;
    case Kind::Negate: return 2;
    case Kind::PermP: return perm_fixes_last(perm) ? 3 : 4;
    case Kind::PermQ: return perm_fixes_last(perm) ? 5 : 6;
    case Kind::SwapPQ: return 7;
  }
  return 0;
}

bool Move::eschenburg_isometry() const {
  const int i = index();
  return i >= 1 && i <= 5;
}

bool Move::wilking_isometry() const {
  const int i = index();
  return i == 1 || i == 2 || i == 3 || i == 5 || i == 7;
}

Move Move::inverse() const {
  switch (kind) {
    case Kind::Shift: return Move::shift(-amount);
    case Kind::Negate: return *this;
    case Kind::PermP: return Move::perm_p(perm_inverse(perm));
    case Kind::PermQ: return Move::perm_q(perm_inverse(perm));
    case Kind::SwapPQ: return *this;
  }
  return *this;
}

std::string Move::str() const {
  switch (kind) {
    case Kind::Shift: return "Shift(" + std::to_string(amount) + ")";
    case Kind::Negate: return "Negate";
    case Kind::PermP:
      return "PermP(" + std::to_string(perm[0] + 1) + std::to_string(perm[1] + 1) +
             std::to_string(perm[2] + 1) + ")";
    case Kind::PermQ:
      return "PermQ(" + std::to_string(perm[0] + 1) + std::to_string(perm[1] + 1) +
             std::to_string(perm[2] + 1) + ")";
    case Kind::SwapPQ: return "SwapPQ";
  }
  return "?";
}

PQPair apply_move(const PQPair& pair, const Move& move) {
  Triple p = pair.p, q = pair.q;
  switch (move.kind) {
    case Move::Kind::Shift:
      for (int i = 0; i < 3; ++i) {
        p[i] = checked_entry(__int128(p[i]) + move.amount, "Shift");
        q[i] = checked_entry(__int128(q[i]) + move.amount, "Shift");
      }
      break;
    case Move::Kind::Negate:
      for (int i = 0; i < 3; ++i) {
        p[i] = -p[i];
        q[i] = -q[i];
      }
      break;
    case Move::Kind::PermP:
      for (int i = 0; i < 3; ++i) p[i] = pair.p[move.perm[i]];
      break;
    case Move::Kind::PermQ:
      for (int i = 0; i < 3; ++i) q[i] = pair.q[move.perm[i]];
      break;
    case Move::Kind::SwapPQ:
      std::swap(p, q);
      break;
  }
  return PQPair{p, q};
}

PQPair apply_moves(const PQPair& pair, const std::vector<Move>& moves) {
  PQPair out = pair;
  for (const Move& m : moves) out = apply_move(out, m);
  return out;
}

namespace {

// Shift so that min(p) = 0; returns the applied move (possibly a no-op).
std::pair<PQPair, Move> normalize_shift(const PQPair& pair) {
  const Int m = -std::min({pair.p[0], pair.p[1], pair.p[2]});
  const Move mv = Move::shift(m);
  if (m == 0) return {pair, mv};
  return {apply_move(pair, mv), mv};
}

std::vector<Move> generators(MoveSet set) {
  std::vector<Move> g;
  const Perm swap12{1, 0, 2};
  switch (set) {
    case MoveSet::EschenburgIsometries:
      for (std::size_t i = 1; i < kAllPerms.size(); ++i) g.push_back(Move::perm_p(kAllPerms[i]));
      g.push_back(Move::perm_q(swap12));
      g.push_back(Move::negate());
      break;
    case MoveSet::WilkingIsometries:
      g.push_back(Move::perm_p(swap12));
      g.push_back(Move::perm_q(swap12));
      g.push_back(Move::negate());
      g.push_back(Move::swap_pq());
      break;
    case MoveSet::AllDiffeos:
      for (std::size_t i = 1; i < kAllPerms.size(); ++i) {
        g.push_back(Move::perm_p(kAllPerms[i]));
        g.push_back(Move::perm_q(kAllPerms[i]));
      }
      g.push_back(Move::negate());
      g.push_back(Move::swap_pq());
      break;
  }
  return g;
}

struct OrbitGraph {
  std::vector<PQPair> states;
  // parent state index and the move word (generator + optional shift) that
  // produced the state from its parent; root has parent -1.
  std::vector<int> parent;
  std::vector<std::vector<Move>> edge;
  std::map<std::array<Int, 6>, int> index;
};

OrbitGraph explore_orbit(const PQPair& start, MoveSet set) {
  OrbitGraph g;
  auto [root, root_shift] = normalize_shift(start);
  (void)root_shift;
  g.states.push_back(root);
  g.parent.push_back(-1);
  g.edge.push_back({});
  g.index[root.key()] = 0;

  const std::vector<Move> gens = generators(set);
  for (std::size_t head = 0; head < g.states.size(); ++head) {
    const PQPair cur = g.states[head];
    for (const Move& mv : gens) {
      PQPair next = apply_move(cur, mv);
      std::vector<Move> word{mv};
      auto [norm, shift_mv] = normalize_shift(next);
      if (shift_mv.amount != 0) word.push_back(shift_mv);
      if (g.index.contains(norm.key())) continue;
      g.index[norm.key()] = static_cast<int>(g.states.size());
      g.states.push_back(norm);
      g.parent.push_back(static_cast<int>(head));
      g.edge.push_back(std::move(word));
    }
  }
  return g;
}

std::vector<Move> path_from_root(const OrbitGraph& g, int node) {
  std::vector<std::vector<Move>> chunks;
  for (int n = node; g.parent[n] >= 0; n = g.parent[n]) chunks.push_back(g.edge[n]);
  std::vector<Move> out;
  for (auto it = chunks.rbegin(); it != chunks.rend(); ++it) {
    out.insert(out.end(), it->begin(), it->end());
  }
  return out;
}

}  // namespace

std::vector<PQPair> orbit(const PQPair& pair, MoveSet set) {
  OrbitGraph g = explore_orbit(pair, set);
  std::vector<PQPair> out = g.states;
  std::sort(out.begin(), out.end());
  return out;
}

PQPair canonical_form(const PQPair& pair, MoveSet set) {
  if (!is_admissible(pair)) {
    throw NotAdmissible("canonical_form: pair is not admissible " + pair.str());
  }
  OrbitGraph g = explore_orbit(pair, set);
  return *std::min_element(g.states.begin(), g.states.end());
}

std::optional<std::vector<Move>> move_path(const PQPair& from, const PQPair& to, MoveSet set) {
  OrbitGraph g = explore_orbit(from, set);
  auto [to_norm, to_shift] = normalize_shift(to);
  auto it = g.index.find(to_norm.key());
  if (it == g.index.end()) return std::nullopt;

  std::vector<Move> word;
  auto [from_norm, from_shift] = normalize_shift(from);
  (void)from_norm;
  if (from_shift.amount != 0) word.push_back(from_shift);
  std::vector<Move> mid = path_from_root(g, it->second);
  word.insert(word.end(), mid.begin(), mid.end());
  if (to_shift.amount != 0) word.push_back(to_shift.inverse());
  return word;
}

bool is_exceptional(const PQPair& pair) {
  if (!is_admissible(pair)) {
    throw NotAdmissible("is_exceptional: pair is not admissible " + pair.str());
  }
  static const PQPair canon_a = canonical_form(PQPair::make({0, 1, 1}, {0, 0, 2}), MoveSet::AllDiffeos);
  static const PQPair canon_b = canonical_form(PQPair::make({0, 0, 0}, {1, 0, -1}), MoveSet::AllDiffeos);
  const PQPair c = canonical_form(pair, MoveSet::AllDiffeos);
  return c == canon_a || c == canon_b;
}

EqualPQNormalForm equal_pq_normal_form(const PQPair& pair) {
  if (!is_admissible(pair)) {
    throw NotAdmissible("equal_pq_normal_form: pair is not admissible " + pair.str());
  }
  bool shared = false;
  for (Int pi : pair.p) {
    for (Int qj : pair.q) shared |= pi == qj;
  }
  if (!shared) {
    throw PreconditionFailed("equal_pq_normal_form: no p_i equals any q_j for " + pair.str());
  }

  EqualPQNormalForm out;
  out.exceptional = is_exceptional(pair);

  OrbitGraph g = explore_orbit(pair, MoveSet::AllDiffeos);
  std::optional<int> best;
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    const PQPair& s = g.states[i];
    if (s.p[1] == 0 && s.p[2] == 0 && s.p[0] >= 0 && s.q[0] == s.p[0] && s.q[1] == -1 &&
        s.q[2] == 1) {
      if (!best || g.states[i] < g.states[*best]) best = static_cast<int>(i);
    }
  }
  if (best) {
    out.form = g.states[*best];
    out.a = out.form->p[0];
    auto [from_norm, from_shift] = normalize_shift(pair);
    (void)from_norm;
    if (from_shift.amount != 0) out.moves.push_back(from_shift);
    std::vector<Move> mid = path_from_root(g, *best);
    out.moves.insert(out.moves.end(), mid.begin(), mid.end());
  }
  return out;
}

NegCaseResult negcase_analysis(const PQPair& pair) {
  if (classify(pair) != CurvatureClass::FlatPlaneEverywhere) {
    throw PreconditionFailed("negcase_analysis: not all six products are <= 0 for " + pair.str());
  }

  NegCaseResult out;
  const Int plo = std::min({pair.p[0], pair.p[1], pair.p[2]});
  const Int phi = std::max({pair.p[0], pair.p[1], pair.p[2]});
  if (std::min(pair.q[0], pair.q[1]) <= plo && std::max(pair.q[0], pair.q[1]) >= phi) {
    out.negcase = NegCase::Case1;
    if (pair.q[0] > pair.q[1]) out.moves.push_back(Move::perm_q({1, 0, 2}));
    out.normalized = apply_moves(pair, out.moves);
    return out;
  }
  if (auto path = move_path(pair, negcase2_representative(), MoveSet::EschenburgIsometries)) {
    out.negcase = NegCase::Case2;
    out.moves = *path;
    out.normalized = negcase2_representative();
    return out;
  }
  if (auto path = move_path(pair, negcase3_representative(), MoveSet::EschenburgIsometries)) {
    out.negcase = NegCase::Case3;
    out.moves = *path;
    out.normalized = negcase3_representative();
    return out;
  }
  throw Error("negcase_analysis: exhausted all three cases for " + pair.str());
}

PQPair cohom2_pair(const Triple& q) {
  const __int128 s = __int128(q[0]) + q[1] + q[2];
  return PQPair::make({0, 0, checked_entry(s, "cohom2_pair")}, q);
}

CandidateReport wilking_candidate_filter(const Triple& q_in) {
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (gcd_abs(q_in[i], q_in[j]) != 1) {
        throw NotPairwiseCoprime("wilking_candidate_filter: gcd(q" + std::to_string(i + 1) +
                                 ",q" + std::to_string(j + 1) + ") != 1 for q=(" +
                                 std::to_string(q_in[0]) + "," + std::to_string(q_in[1]) + "," +
                                 std::to_string(q_in[2]) + ")");
      }
    }
  }

  CandidateReport rep;
  Triple q = q_in;
  auto sum = [](const Triple& t) { return t[0] + t[1] + t[2]; };
  if (sum(q) < 0) {
    rep.normalization.push_back(Move::negate());
    for (auto& v : q) v = -v;
  }
  if (q[0] < q[1]) {
    rep.normalization.push_back(Move::perm_q({1, 0, 2}));
    std::swap(q[0], q[1]);
  }
  rep.normalized_q = q;

  const Int s = sum(q);
  const bool has_zero = q[0] == 0 || q[1] == 0 || q[2] == 0;

  if (s == 0) {
    // Homogeneous family: only the (1,-1,0) weights miss a positively curved
    // homogeneous metric.
    rep.verdict = has_zero ? CandidateVerdict::KnownAlmostPositiveHomogeneous
                           : CandidateVerdict::KnownPositive;
    return rep;
  }
  if (q[0] == q[1]) {
    // Cohomogeneity one: positively curved unless diffeomorphic to the
    // exceptional almost positively curved space.
    rep.verdict = is_exceptional(cohom2_pair(q)) ? CandidateVerdict::KnownAlmostPositiveCohomOne
                                                 : CandidateVerdict::KnownPositive;
    return rep;
  }
  if (has_zero) {
    // Pairwise coprime with a zero entry and positive sum forces a
    // permutation of (1,1,0), which swaps into the exceptional space.
    rep.verdict = CandidateVerdict::KnownAlmostPositiveCohomOne;
    return rep;
  }
  if (q[0] > 0 && q[1] > 0 && q[2] > 0) {
    rep.verdict = CandidateVerdict::KnownPositive;
    return rep;
  }
  if (q[0] < 0 || (q[1] < 0 && q[2] < 0)) {
    // Two negative entries put every q_i outside [0, sum], so the space is
    // positively curved.
    rep.verdict = CandidateVerdict::KnownPositive;
    return rep;
  }

  // Here q1 > 0, q1 > q2, sum > 0 and q2*q3 < 0.
  rep.subcase_2a = q[1] + q[2] >= 0;
  rep.subcase_2b = q[1] < 0 && q[0] + q[1] >= 0;
  rep.subcase_2c = q[2] < 0 && q[0] + q[2] > 0;
  if (rep.subcase_2a || rep.subcase_2b || rep.subcase_2c) {
    rep.verdict = CandidateVerdict::NewCandidate;
  } else {
    rep.verdict = CandidateVerdict::KnownPositive;
  }
  return rep;
}

}  // namespace esch
