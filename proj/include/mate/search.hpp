#pragma once

#include <utility>
#include <vector>

#include "mate/model.hpp"
#include "mate/rng.hpp"
#include "mate/seqeval.hpp"

namespace mate {

enum class MoveKind { TwoOpt, TwoOptStar, OrOpt, Swap };

const char* to_string(MoveKind kind);

/// One neighbourhood move. Positions index the routes as they are before
/// the move is applied.
///
///   TwoOpt      route_a == route_b; swaps route_a[pos_a], route_a[pos_a+1].
///   TwoOptStar  route_a < route_b; tail of a after pos_a is exchanged with
///               the tail of b after pos_b.
///   OrOpt       segment route_a[pos_a .. pos_a+len_a-1] moves into route_b
///               between pos_b and pos_b+1, orientation kept.
///   Swap        segment (route_a, pos_a, len_a) is exchanged with segment
///               (route_b, pos_b, len_b); on one route pos_a+len_a <= pos_b.
struct Move {
  MoveKind kind = MoveKind::TwoOpt;
  int route_a = 0;
  int route_b = 0;
  int pos_a = 0;
  int len_a = 0;
  int pos_b = 0;
  int len_b = 0;

  bool operator==(const Move&) const = default;
};

/// Calls `fn(const Move&)` on every structurally valid move of `s`, ordered
/// by kind, then route indices, then positions.
template <class Fn>
void for_each_move(const Solution& s, Fn&& fn);

std::vector<Move> enumerate_moves(const Solution& s);

/// Span decomposition of a move, for constant-time evaluation.
MovePlan plan_move(const Solution& s, const Move& mv);

/// Applies the move by splicing node vectors. Emptied routes are removed.
void apply_move(Solution& s, const Move& mv);

/// Removes depot-only routes, preserving the order of the rest.
void remove_empty_routes(Solution& s);

/// Best-improvement descent over the four operators until no strictly
/// improving feasible move remains.
Solution find_local_optimum(const Instance& inst, Solution s);

struct EscapeParams {
  double omega1 = 0.2;
  double omega2 = 0.4;
  double corr_eta = 1.0;
  double corr_penalty = 10.0;
};

/// Mean off-diagonal distance over mean off-diagonal travel time (1 when
/// undefined).
double distance_time_ratio(const Instance& inst);

/// How well `j` follows `i`; lower means more related.
double correlation(const Instance& inst, const EscapeParams& esc, NodeId i, NodeId j);

/// Number of customers to remove: uniform over [ceil(w1*M), floor(w2*M)],
/// or max(1, round(w1*M)) when that range is empty; never above M.
int draw_removal_count(int num_customers, const EscapeParams& esc, Rng& rng);

struct Removal {
  Solution partial;
  std::vector<NodeId> removed;  // in removal order
};

/// Correlation-guided removal of exactly q customers.
Removal shaw_removal(const Instance& inst, const EscapeParams& esc, const Solution& s, int q,
                     Rng& rng);

/// Descent, then repeated remove/reinsert/descent while it strictly improves.
Solution local_search(const Instance& inst, const EscapeParams& esc, Solution s, Rng& rng);

// ---------------------------------------------------------------------------

template <class Fn>
void for_each_move(const Solution& s, Fn&& fn) {
  const int k = s.num_routes();
  auto len = [&s](int r) { return static_cast<int>(s.routes[static_cast<std::size_t>(r)].size()); };

  for (int r = 0; r < k; ++r) {
    const int n = len(r);
    for (int i = 1; i + 1 <= n - 2; ++i) fn(Move{MoveKind::TwoOpt, r, r, i, 2, 0, 0});
  }

  for (int a = 0; a < k; ++a) {
    const int na = len(a);
    for (int b = a + 1; b < k; ++b) {
      const int nb = len(b);
      for (int i = 0; i <= na - 2; ++i) {
        for (int j = 0; j <= nb - 2; ++j) {
          if ((i == 0 && j == 0) || (i == na - 2 && j == nb - 2)) continue;
          fn(Move{MoveKind::TwoOptStar, a, b, i, 0, j, 0});
        }
      }
    }
  }

  for (int a = 0; a < k; ++a) {
    const int na = len(a);
    for (int b = 0; b < k; ++b) {
      const int nb = len(b);
      for (int i = 1; i <= na - 2; ++i) {
        for (int l = 1; l <= 2 && i + l - 1 <= na - 2; ++l) {
          for (int j = 0; j <= nb - 2; ++j) {
            if (a == b && j >= i - 1 && j <= i + l - 1) continue;
            fn(Move{MoveKind::OrOpt, a, b, i, l, j, 0});
          }
        }
      }
    }
  }

  for (int a = 0; a < k; ++a) {
    const int na = len(a);
    for (int b = a; b < k; ++b) {
      const int nb = len(b);
      for (int i = 1; i <= na - 2; ++i) {
        for (int la = 1; la <= 2 && i + la - 1 <= na - 2; ++la) {
          for (int j = (a == b ? i + la : 1); j <= nb - 2; ++j) {
            for (int lb = 1; lb <= 2 && j + lb - 1 <= nb - 2; ++lb) {
              fn(Move{MoveKind::Swap, a, b, i, la, j, lb});
            }
          }
        }
      }
    }
  }
}

}  // namespace mate
