#pragma once

#include "ideq/instance.hpp"
#include "ideq/rng.hpp"

namespace ideq {

/// A 2-change: positions i < j in the visit order, removing the edges
/// (order[i], order[i+1]) and (order[j], order[j+1 mod n]) and reconnecting
/// by reversing the segment in between. The removed edges must be distinct
/// and non-adjacent: j >= i+2 and not (i == 0 and j == n-1).
struct TwoChangeMove {
    int i = 0;
    int j = 0;
};

bool is_valid_move(const TwoChangeMove& move, int n);

/// Number of valid moves for a tour of size n: n*(n-3)/2.
std::size_t valid_move_count(int n);

/// The k-th valid move in (i, j) lexicographic order.
TwoChangeMove move_at(int n, std::size_t k);

/// Reverses order[i+1..j]; applying the same move again restores the
/// original edge set.
Tour apply_two_change(const Tour& tour, const TwoChangeMove& move);

/// Length change of applying `move`, from the four affected edges only.
double two_change_delta(const Instance& instance, const Tour& tour, const TwoChangeMove& move);

/// Best-improvement 2-opt: repeatedly applies the single move with the
/// largest strict decrease (ties to smallest (i, j)) until no move improves
/// by more than 1e-12. The result is a fixed point of the operator.
/// `iterations`, when given, receives the number of moves applied.
Tour two_opt(const Instance& instance, const Tour& tour, int* iterations = nullptr);

/// True iff no valid 2-change strictly decreases the length (tolerance 1e-12).
bool is_two_opt_fixed_point(const Instance& instance, const Tour& tour);

/// Two uniformly random valid 2-changes applied in sequence: a sample from
/// the 2-opt equivalence class of the input. Requires n >= 5.
Tour sample_equivalence_target(const Tour& optimal, CounterRng& rng);

constexpr double kImprovementThreshold = 1e-12;

}  // namespace ideq
