#include "gkd/section.hpp"

#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gkd/par.hpp"

namespace gkd::par {

Mode& mode() {
#ifdef _OPENMP
  static Mode m = Mode::openmp;
#else
  static Mode m = Mode::serial;
#endif
  return m;
}

int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace gkd::par

namespace gkd {

namespace {

// generic grouped convolution: deterministic regardless of execution mode
template <class Fib, class SecT, class Op>
SecT convolve_impl(const SecT& a, const SecT& b, const Op& op, SecT out) {
  std::vector<std::pair<const Freq*, const Fib*>> ta, tb;
  ta.reserve(a.t.size());
  tb.reserve(b.t.size());
  for (const auto& [k, f] : a.t) ta.emplace_back(&k, &f);
  for (const auto& [k, f] : b.t) tb.emplace_back(&k, &f);

  // group term pairs by output frequency (stable order: i then j ascending)
  std::map<Freq, std::vector<std::pair<int, int>>> groups;
  for (size_t i = 0; i < ta.size(); ++i)
    for (size_t j = 0; j < tb.size(); ++j)
      groups[freq_add(*ta[i].first, *tb[j].first)].emplace_back(i, j);

  std::vector<const Freq*> keys;
  std::vector<const std::vector<std::pair<int, int>>*> work;
  keys.reserve(groups.size());
  for (const auto& [k, v] : groups) {
    keys.push_back(&k);
    work.push_back(&v);
  }
  std::vector<Fib> results(groups.size());

  auto run_one = [&](size_t g) {
    Fib acc{};
    // fixed-order in-group summation keeps results thread-count independent
    for (auto [i, j] : *work[g])
      acc += op(*ta[i].first, *ta[i].second, *tb[j].first, *tb[j].second);
    results[g] = std::move(acc);
  };

#ifdef _OPENMP
  if (par::mode() == par::Mode::openmp) {
#pragma omp parallel for schedule(dynamic)
    for (long g = 0; g < static_cast<long>(groups.size()); ++g)
      run_one(static_cast<size_t>(g));
  } else
#endif
  {
    for (size_t g = 0; g < groups.size(); ++g) run_one(g);
  }

  for (size_t g = 0; g < groups.size(); ++g) out.add_term(*keys[g], results[g]);
  return out;
}

}  // namespace

XSec convolve(const XSec& a, const XSec& b, const FiberBinOp& op) {
  XSec out(a.n ? a.n : b.n);
  auto opk = [&op](const Freq&, const ExtFiber& x, const Freq&, const ExtFiber& y) {
    return op(x, y);
  };
  return convolve_impl<ExtFiber>(a, b, opk, std::move(out));
}

XSec convolve_freq(const XSec& a, const XSec& b, const FiberBinOpK& op) {
  XSec out(a.n ? a.n : b.n);
  return convolve_impl<ExtFiber>(a, b, op, std::move(out));
}

MatSec convolve_mat(const MatSec& a, const MatSec& b) {
  MatSec out(a.n, a.rows, b.cols);
  auto op = [](const Mat& x, const Mat& y) { return x * y; };
  // Mat lacks default dims for +=; accumulate through a wrapper
  std::vector<std::pair<const Freq*, const Mat*>> ta, tb;
  for (const auto& [k, f] : a.t) ta.emplace_back(&k, &f);
  for (const auto& [k, f] : b.t) tb.emplace_back(&k, &f);
  std::map<Freq, std::vector<std::pair<int, int>>> groups;
  for (size_t i = 0; i < ta.size(); ++i)
    for (size_t j = 0; j < tb.size(); ++j)
      groups[freq_add(*ta[i].first, *tb[j].first)].emplace_back(i, j);
  std::vector<const Freq*> keys;
  std::vector<const std::vector<std::pair<int, int>>*> work;
  for (const auto& [k, v] : groups) {
    keys.push_back(&k);
    work.push_back(&v);
  }
  std::vector<Mat> results(groups.size());
  auto run_one = [&](size_t g) {
    Mat acc(a.rows, b.cols);
    for (auto [i, j] : *work[g]) acc = acc + op(*ta[i].second, *tb[j].second);
    results[g] = std::move(acc);
  };
#ifdef _OPENMP
  if (par::mode() == par::Mode::openmp) {
#pragma omp parallel for schedule(dynamic)
    for (long g = 0; g < static_cast<long>(groups.size()); ++g)
      run_one(static_cast<size_t>(g));
  } else
#endif
  {
    for (size_t g = 0; g < groups.size(); ++g) run_one(g);
  }
  for (size_t g = 0; g < groups.size(); ++g) out.add_term(*keys[g], results[g]);
  return out;
}

ExtFiber cl2_apply_fiber(const ExtFiber& W, const ExtFiber& phi) {
  int n = W.n ? W.n : phi.n;
  ExtFiber out(n);
  for (const auto& [w, s] : W.c) {
    int d = word_deg(w);
    if (d == 0) {
      out += s * phi;
    } else {
      assert(d == 2);
      int i = __builtin_ctz(w);
      int j = __builtin_ctz(w & (w - 1));
      ExtFiber ei = ExtFiber::term(n, Word(1) << i, Scalar(1));
      ExtFiber ej = ExtFiber::term(n, Word(1) << j, Scalar(1));
      ExtFiber val = spin1(ei, spin1(ej, phi));
      if (pair2_gen(n, i, j)) val -= Scalar::rat(1, 2) * phi;
      out += s * val;
    }
  }
  return out;
}

}  // namespace gkd
