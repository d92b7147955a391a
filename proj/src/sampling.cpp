#include "pickfreeze/sampling.hpp"

#include "pickfreeze/parallel.hpp"
#include "pickfreeze/rng.hpp"

namespace pickfreeze {

std::vector<double> sample_input(const InputDistribution& dist, int n, std::uint64_t seed) {
  if (n < 1) throw ParameterError("sample_input: n must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  RngStream g(seed, 0);
  for (int i = 0; i < n; ++i) out[std::size_t(i)] = dist.sample(g);
  return out;
}

PickFreezeSample generate_pick_freeze(const ModelSpec& model, const Design& design, int n,
                                      std::uint64_t seed, int threads) {
  if (design.p() != model.p())
    throw DesignError("pick-freeze: design dimension differs from model dimension");
  if (n < 2) throw DesignError("pick-freeze: n must be >= 2");
  if (!model.f) throw ParameterError("pick-freeze: model has no evaluator");

  const int k = design.k();
  const int p = model.p();
  PickFreezeSample s{std::vector<double>(std::size_t(n)),
                     std::vector<std::vector<double>>(std::size_t(k),
                                                      std::vector<double>(std::size_t(n))),
                     design, seed};

  parallel_chunks(n, threads, [&](std::int64_t lo, std::int64_t hi) {
    std::vector<double> x(static_cast<std::size_t>(p));
    std::vector<double> xv(static_cast<std::size_t>(p));
    for (std::int64_t i = lo; i < hi; ++i) {
      RngStream base(seed, stream_id(0, std::uint64_t(i)));
      for (int c = 0; c < p; ++c) x[std::size_t(c)] = model.inputs[std::size_t(c)].sample(base);
      s.y[std::size_t(i)] = model.f(x);
      for (int j = 0; j < k; ++j) {
        RngStream fresh(seed, stream_id(std::uint64_t(j) + 1, std::uint64_t(i)));
        for (int c = 0; c < p; ++c) {
          xv[std::size_t(c)] = design.frozen(j, c + 1)
                                   ? x[std::size_t(c)]
                                   : model.inputs[std::size_t(c)].sample(fresh);
        }
        s.yu[std::size_t(j)][std::size_t(i)] = model.f(xv);
      }
    }
  });
  return s;
}

}  // namespace pickfreeze
