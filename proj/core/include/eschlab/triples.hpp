#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eschlab/errors.hpp"

namespace esch {

using Int = std::int64_t;
using Triple = std::array<Int, 3>;

// Entries are capped well below the int64 range so that sums and differences
// of two entries can never wrap; the six products are evaluated in 128 bits.
inline constexpr Int kMaxEntryMagnitude = Int{1} << 62;

// A weight pair (p, q) with equal coordinate sums.  Each such pair defines a
// circle action on SU(3); when the pair is admissible the quotient is an
// Eschenburg space.
struct PQPair {
  Triple p{};
  Triple q{};

  // Validates the sum constraint and the magnitude cap.
  static PQPair make(const Triple& p, const Triple& q);

  auto operator<=>(const PQPair&) const = default;

  // Lexicographic key (p1,p2,p3,q1,q2,q3).
  std::array<Int, 6> key() const { return {p[0], p[1], p[2], q[0], q[1], q[2]}; }

  std::string str() const;
};

enum class CurvatureClass {
  PositivelyCurved,
  AlmostPositive,
  QuasiPositive,
  FlatPlaneEverywhere,
};

const char* to_string(CurvatureClass c);

// A permutation of {0,1,2} stored as its image tuple: perm[i] = sigma(i).
using Perm = std::array<int, 3>;

inline constexpr Perm kPermId{0, 1, 2};
// Fixed ordering of the six permutations used everywhere a product array is
// produced: id, (12), (13), (23), (123), (132).
inline constexpr std::array<Perm, 6> kAllPerms{{
    {0, 1, 2},  // id
    {1, 0, 2},  // (12)
    {2, 1, 0},  // (13)
    {0, 2, 1},  // (23)
    {1, 2, 0},  // (123)
    {2, 0, 1},  // (132)
}};

bool perm_fixes_last(const Perm& s);
Perm perm_inverse(const Perm& s);

// The six products (p_{sigma(1)} - q_1)(p_{sigma(2)} - q_2), sigma in the
// order of kAllPerms.  Computed exactly in 128-bit arithmetic.
using SixProducts = std::array<__int128, 6>;

SixProducts six_products(const PQPair& pair);
std::string int128_str(__int128 v);
// Narrowing accessor for serialization; throws Overflow if out of range.
Int product_as_int64(__int128 v);

// The seven weight-pair modifications.  Moves 1-5 preserve the Eschenburg
// metric's isometry type, moves 1,2,3,5,7 preserve the Wilking one; all seven
// preserve the diffeomorphism type.
struct Move {
  enum class Kind { Shift, Negate, PermP, PermQ, SwapPQ };

  Kind kind = Kind::Shift;
  Int amount = 0;  // Shift only
  Perm perm = kPermId;  // PermP / PermQ only

  static Move shift(Int m) { return {Kind::Shift, m, kPermId}; }
  static Move negate() { return {Kind::Negate, 0, kPermId}; }
  static Move perm_p(const Perm& s) { return {Kind::PermP, 0, s}; }
  static Move perm_q(const Perm& s) { return {Kind::PermQ, 0, s}; }
  static Move swap_pq() { return {Kind::SwapPQ, 0, kPermId}; }

  // Move numbering from the classification of modifications (1..7).
  int index() const;
  bool eschenburg_isometry() const;
  bool wilking_isometry() const;
  Move inverse() const;
  std::string str() const;

  bool operator==(const Move&) const = default;
};

enum class MoveSet { EschenburgIsometries, WilkingIsometries, AllDiffeos };

// Applies one move; output keeps the sum invariant.  Throws Overflow when a
// shift pushes an entry past the magnitude cap.
PQPair apply_move(const PQPair& pair, const Move& move);
PQPair apply_moves(const PQPair& pair, const std::vector<Move>& moves);

// True iff gcd(p_{sigma(1)} - q_1, p_{sigma(2)} - q_2) = 1 for all six
// permutations, with gcd taken on absolute values and gcd(0,0) = 0.
bool is_admissible(const PQPair& pair);

// Four-way classification from the signs of the six products.  Requires
// admissibility.
CurvatureClass classify(const PQPair& pair);

// Eschenburg's positivity criterion: no q_i lies in [min p, max p].
bool eschenburg_positive(const PQPair& pair);

// Lexicographically least pair in the orbit of `pair` under the selected
// moves composed with the normalization "shift so that min(p) = 0".  The
// shift quotient makes every orbit finite.
PQPair canonical_form(const PQPair& pair, MoveSet set);

// All states of the shift-normalized orbit, sorted.
std::vector<PQPair> orbit(const PQPair& pair, MoveSet set);

// Replayable move word from `from` to `to` through the selected move set
// (including normalization shifts), or nullopt when the orbits differ.
std::optional<std::vector<Move>> move_path(const PQPair& from, const PQPair& to, MoveSet set);

// True iff the pair is related by diffeomorphism moves to ((0,1,1),(0,0,2))
// or ((0,0,0),(1,0,-1)), the two non-positively-curved spaces known to carry
// almost positively curved metrics.
bool is_exceptional(const PQPair& pair);

// Normal form for pairs with a shared entry p_i = q_j: up to moves such a
// pair becomes ((a,0,0),(a,-1,1)) with a >= 0, and is exceptional exactly
// when a second coincidence p_1 = q_2 can also be arranged.
struct EqualPQNormalForm {
  bool exceptional = false;
  // Present whenever the ((a,0,0),(a,-1,1)) state is reachable.
  std::optional<PQPair> form;
  Int a = 0;
  std::vector<Move> moves;
};
EqualPQNormalForm equal_pq_normal_form(const PQPair& pair);

// Case analysis for pairs whose six products are all non-positive.
enum class NegCase { Case1 = 1, Case2 = 2, Case3 = 3 };
struct NegCaseResult {
  NegCase negcase = NegCase::Case1;
  // Isometry moves bringing the pair to the case's normalized shape
  // (q1 <= min p <= max p <= q2 for case 1, the fixed representative pair
  // for cases 2 and 3).
  std::vector<Move> moves;
  PQPair normalized;
};
NegCaseResult negcase_analysis(const PQPair& pair);

inline const PQPair& negcase2_representative() {
  static const PQPair rep = PQPair::make({0, 0, 2}, {0, 1, 1});
  return rep;
}
inline const PQPair& negcase3_representative() {
  static const PQPair rep = PQPair::make({-1, 0, 1}, {0, 0, 0});
  return rep;
}

// Decision tree isolating the cohomogeneity-two Wilking candidates that are
// not diffeomorphic to a known positively / almost positively curved space.
enum class CandidateVerdict {
  KnownPositive,
  KnownAlmostPositiveHomogeneous,
  KnownAlmostPositiveCohomOne,
  NewCandidate,
};

const char* to_string(CandidateVerdict v);

struct CandidateReport {
  CandidateVerdict verdict = CandidateVerdict::KnownPositive;
  bool subcase_2a = false;  // q2 + q3 >= 0
  bool subcase_2b = false;  // q2 < 0 and q1 + q2 >= 0
  bool subcase_2c = false;  // q3 < 0 and q1 + q3 > 0
  Triple normalized_q{};
  std::vector<Move> normalization;  // Negate / PermQ moves applied
};

// Requires pairwise coprime q.  Applies Negate / q-swap normalization itself
// (so that sum >= 0 and q1 >= q2) and records the moves.
CandidateReport wilking_candidate_filter(const Triple& q);

// p = (0, 0, q1+q2+q3): the weight pair of a cohomogeneity-two candidate.
PQPair cohom2_pair(const Triple& q);

}  // namespace esch
