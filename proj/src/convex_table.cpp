#include <cmath>

#include "locconvex/bruhat.hpp"

namespace locconvex {

namespace {

SpinPair make_spin(double la, double lb, double lc, double ld, double ra, double rb, double rc,
                   double rd) {
  return {UnitQuat(Quat{la, lb, lc, ld}, 1e-9), UnitQuat(Quat{ra, rb, rc, rd}, 1e-9)};
}

struct RawEntry {
  int dim;
  double l[4];
  double r[4];
  const char* cell;
  double fl[4];
  double fr[4];
  const char* future_cell;
};

constexpr double S = M_SQRT1_2;
constexpr double H = 0.5;

// Final lifted frames of convex arcs, one representative per cell, ordered by
// cell dimension. The future columns hold the cell the frame flows into.
const RawEntry kRaw[24] = {
    {0, {1, 0, 0, 0}, {-1, 0, 0, 0}, "P_e;15", {-1, 0, 0, 0}, {0, 0, 0, -1}, "P_(14)(23);10"},

    {1, {S, -S, 0, 0}, {-S, -S, 0, 0}, "P_(12);7", {0, 1, 0, 0}, {0, 0, 1, 0}, "P_(14)(23);9"},
    {1, {S, 0, 0, -S}, {-S, 0, 0, S}, "P_(23);11", {0, 0, 0, 1}, {-1, 0, 0, 0}, "P_(14)(23);12"},
    {1, {S, -S, 0, 0}, {-S, S, 0, 0}, "P_(34);13", {0, 1, 0, 0}, {0, 0, -1, 0}, "P_(14)(23);6"},

    {2, {H, -H, H, -H}, {-H, H, -H, H}, "P_(234);9", {0, 1, 0, 0}, {0, 0, -1, 0},
     "P_(14)(23);6"},
    {2, {H, -H, -H, -H}, {-H, H, H, H}, "P_(243);15", {0, 0, 0, 1}, {-1, 0, 0, 0},
     "P_(14)(23);12"},
    {2, {H, -H, -H, -H}, {-H, -H, -H, H}, "P_(123);3", {0, 0, 0, 1}, {-1, 0, 0, 0},
     "P_(14)(23);12"},
    {2, {H, -H, H, -H}, {-H, -H, H, H}, "P_(132);15", {0, 1, 0, 0}, {0, 0, 1, 0},
     "P_(14)(23);9"},
    {2, {0, -1, 0, 0}, {-1, 0, 0, 0}, "P_(12)(34);5", {1, 0, 0, 0}, {0, 0, 0, -1},
     "P_(14)(23);5"},

    {3, {0, -S, 0, -S}, {0, -S, 0, S}, "P_(13);11", {1, 0, 0, 0}, {0, 0, 0, 1},
     "P_(14)(23);10"},
    {3, {0, -S, 0, -S}, {0, S, 0, S}, "P_(24);13", {1, 0, 0, 0}, {0, 0, 0, 1},
     "P_(14)(23);10"},
    {3, {0, -S, 0, -S}, {-S, 0, -S, 0}, "P_(1234);1", {1, 0, 0, 0}, {0, 0, 0, -1},
     "P_(14)(23);5"},
    {3, {0, -S, 0, -S}, {-S, 0, S, 0}, "P_(1432);7", {1, 0, 0, 0}, {0, 0, 0, -1},
     "P_(14)(23);5"},
    {3, {0, -S, -S, 0}, {-S, 0, 0, S}, "P_(1243);7", {0, 0, 0, 1}, {-1, 0, 0, 0},
     "P_(14)(23);12"},
    {3, {0, -S, S, 0}, {-S, 0, 0, S}, "P_(1342);13", {0, 0, 0, -1}, {-1, 0, 0, 0},
     "P_(14)(23);3"},

    {4, {-H, -H, H, -H}, {-H, -H, -H, H}, "P_(134);9", {0, 0, 0, -1}, {-1, 0, 0, 0},
     "P_(14)(23);3"},
    {4, {-H, -H, -H, -H}, {-H, H, -H, H}, "P_(124);5", {0, -1, 0, 0}, {0, 0, -1, 0},
     "P_(14)(23);9"},
    {4, {0, -1, 0, 0}, {0, 0, 0, 1}, "P_(13)(24);15", {1, 0, 0, 0}, {0, 0, 0, 1},
     "P_(14)(23);10"},
    {4, {-H, -H, -H, -H}, {-H, -H, H, H}, "P_(143);3", {0, -1, 0, 0}, {0, 0, 1, 0},
     "P_(14)(23);6"},
    {4, {-H, -H, H, -H}, {-H, H, H, H}, "P_(142);5", {0, 0, 0, -1}, {-1, 0, 0, 0},
     "P_(14)(23);3"},

    {5, {-S, 0, 0, -S}, {-S, 0, 0, S}, "P_(14);1", {0, 0, 0, -1}, {-1, 0, 0, 0},
     "P_(14)(23);3"},
    {5, {-S, -S, 0, 0}, {0, 0, -S, S}, "P_(1324);13", {0, -1, 0, 0}, {0, 0, -1, 0},
     "P_(14)(23);9"},
    {5, {-S, -S, 0, 0}, {0, 0, S, S}, "P_(1423);7", {0, -1, 0, 0}, {0, 0, 1, 0},
     "P_(14)(23);6"},

    {6, {-1, 0, 0, 0}, {0, 0, 0, 1}, "P_(14)(23);5", {-1, 0, 0, 0}, {0, 0, 0, 1},
     "P_(14)(23);5"},
};

std::vector<ConvexTableEntry> build_table() {
  std::vector<ConvexTableEntry> table;
  table.reserve(24);
  for (const RawEntry& e : kRaw) {
    ConvexTableEntry entry{
        e.dim,
        make_spin(e.l[0], e.l[1], e.l[2], e.l[3], e.r[0], e.r[1], e.r[2], e.r[3]),
        parse_signed_perm(e.cell),
        make_spin(e.fl[0], e.fl[1], e.fl[2], e.fl[3], e.fr[0], e.fr[1], e.fr[2], e.fr[3]),
        parse_signed_perm(e.future_cell)};
    table.push_back(std::move(entry));
  }
  return table;
}

}  // namespace

const std::vector<ConvexTableEntry>& convex_table() {
  static const std::vector<ConvexTableEntry> table = build_table();
  return table;
}

}  // namespace locconvex
