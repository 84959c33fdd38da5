#pragma once

// Test-only reference implementations, written independently of the library
// code paths they check.
//
// The nested-set classifier follows the recursive definitions literally:
//   U^(0)  = {omega_0 = 1}
//   Q^(k)  = U^(k) minus any shifted U^(k) within the next q steps
//   U^(k)  = U^(k-1) \ Q^(k-1)
// A position realizes kappa = k when it lies in Q^(k). Positions whose
// membership cannot be decided inside the finite window are "censored".

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace oracle {

enum class Tri { no, yes, unknown };

class NestedSets {
 public:
  NestedSets(std::string bits, std::uint64_t q) : bits_(std::move(bits)), q_(q) {}

  Tri in_U(std::int64_t p, std::int64_t k) {
    if (k == 0) {
      if (p >= std::int64_t(bits_.size())) return Tri::unknown;
      return bits_[std::size_t(p)] == '1' ? Tri::yes : Tri::no;
    }
    const auto key = std::make_pair(p, k);
    auto it = u_memo_.find(key);
    if (it != u_memo_.end()) return it->second;
    u_memo_[key] = Tri::unknown;  // cut (no actual recursion cycles occur)
    Tri res;
    const Tri u = in_U(p, k - 1);
    if (u == Tri::no) {
      res = Tri::no;
    } else {
      const Tri qq = in_Q(p, k - 1);
      if (qq == Tri::yes)
        res = Tri::no;
      else if (u == Tri::yes && qq == Tri::no)
        res = Tri::yes;
      else
        res = Tri::unknown;
    }
    u_memo_[key] = res;
    return res;
  }

  Tri in_Q(std::int64_t p, std::int64_t k) {
    const auto key = std::make_pair(p, k);
    auto it = q_memo_.find(key);
    if (it != q_memo_.end()) return it->second;
    q_memo_[key] = Tri::unknown;
    Tri res;
    const Tri u = in_U(p, k);
    if (u == Tri::no) {
      res = Tri::no;
    } else {
      bool any_unknown = (u == Tri::unknown);
      bool any_yes = false;
      for (std::int64_t i = 1; i <= std::int64_t(q_); ++i) {
        const Tri s = in_U(p + i, k);
        if (s == Tri::yes) any_yes = true;
        if (s == Tri::unknown) any_unknown = true;
      }
      if (any_yes)
        res = Tri::no;
      else if (any_unknown)
        res = Tri::unknown;
      else
        res = Tri::yes;
    }
    q_memo_[key] = res;
    return res;
  }

  // kappa for a 1-position, or -1 if censored. k is bounded by the number of
  // ones in the window, so the search below always terminates.
  std::int64_t classify(std::int64_t p) {
    std::int64_t ones = 0;
    for (char c : bits_) ones += (c == '1');
    for (std::int64_t k = 0; k <= ones; ++k) {
      const Tri r = in_Q(p, k);
      if (r == Tri::yes) return k;
      if (r == Tri::unknown) return -1;
    }
    return -1;
  }

 private:
  std::string bits_;
  std::uint64_t q_;
  std::map<std::pair<std::int64_t, std::int64_t>, Tri> u_memo_;
  std::map<std::pair<std::int64_t, std::int64_t>, Tri> q_memo_;
};

// Exact probabilities of kappa classifications for the moving-maximum process
// X_i = max(Y_{i-2}, Y_i) with iid Y and P(Y <= u) = a, by enumeration over
// exceedance patterns of the Y window. Returns P(kappa(position 0) == k).
// Patterns whose classification is still undecided at the window edge carry a
// total probability reported in `undecided`.
struct MMAEnumeration {
  std::vector<double> q_prob;  // index k
  double undecided = 0.0;
};

inline MMAEnumeration mma_q_probabilities(double a, std::uint64_t q,
                                          std::int64_t kappa_max,
                                          std::int64_t window) {
  // Y indices -2..window-1 -> m = window + 2 indicator bits.
  const std::int64_t m = window + 2;
  MMAEnumeration out;
  out.q_prob.assign(std::size_t(kappa_max + 1), 0.0);
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    double prob = 1.0;
    auto ybit = [&](std::int64_t idx) {  // idx in [-2, window)
      return int((mask >> std::uint64_t(idx + 2)) & 1ULL);
    };
    for (std::int64_t i = -2; i < window; ++i)
      prob *= ybit(i) ? (1.0 - a) : a;
    if (prob == 0.0) continue;
    std::string xbits;
    for (std::int64_t i = 0; i < window; ++i)
      xbits.push_back((ybit(i - 2) || ybit(i)) ? '1' : '0');
    if (xbits[0] != '1') continue;
    NestedSets ns(xbits, q);
    const std::int64_t k = ns.classify(0);
    if (k < 0)
      out.undecided += prob;
    else if (k <= kappa_max)
      out.q_prob[std::size_t(k)] += prob;
  }
  return out;
}

}  // namespace oracle
