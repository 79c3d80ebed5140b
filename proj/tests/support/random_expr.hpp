#pragma once

#include <random>

#include "kahler/expr.hpp"

namespace desk {

// Random holomorphic expressions over z1..zm, w1..wm that stay finite on the
// unit box: denominators are exponentials and logarithms see 3 + (bounded).
class ExprGen {
 public:
  ExprGen(std::uint64_t seed, int m) : rng_(seed), m_(m) {}

  kahler::Expr make(int depth) {
    using namespace kahler;
    if (depth <= 0 || pick(4) == 0) return leaf();
    switch (pick(10)) {
      case 0: return make(depth - 1) + make(depth - 1);
      case 1: return make(depth - 1) - make(depth - 1);
      case 2:
      case 3: return make(depth - 1) * make(depth - 1);
      case 4: return make(depth - 1) / exp(leaf());
      case 5: return pow(make(depth - 1), 1 + pick(3));
      case 6: return sin(make(depth - 1));
      case 7: return cos(make(depth - 1));
      case 8: return log(Expr(3.0) + var());
      default: return -make(depth - 1);
    }
  }

  kahler::Expr var() {
    const int i = 1 + pick(m_);
    return pick(2) ? kahler::Expr(kahler::Symbol::z(i)) : kahler::Expr(kahler::Symbol::w(i));
  }

  kahler::Expr leaf() {
    if (pick(3) == 0) {
      std::uniform_real_distribution<double> u(-2.0, 2.0);
      return kahler::Expr(kahler::cplx{u(rng_), pick(2) ? u(rng_) : 0.0});
    }
    return var();
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::mt19937_64 rng_;
  int m_;
};

}  // namespace desk
