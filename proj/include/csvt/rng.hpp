#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>

namespace csvt::rng {

// SplitMix64 finalizer. Used both as a stand-alone mixer and to expand a
// master seed into well-separated per-replication stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream seed for (master, point, rep). Each replication gets its own
// mt19937_64 instance seeded here, so replications are independent and the
// result does not depend on how replications are scheduled across threads.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point,
                                 std::uint64_t rep) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ (point + 0x632be59bd9b4e019ULL));
  s = splitmix64(s ^ (rep + 0x1b873593a2ca62b1ULL));
  return s;
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(splitmix64(seed)); }

inline Engine make_engine(std::uint64_t master, std::uint64_t point,
                          std::uint64_t rep) {
  return Engine(derive_seed(master, point, rep));
}

namespace detail {

// 128-layer ziggurat tables for the standard normal (Marsaglia & Tsang 2000).
// Data generation draws ~10^7 normals per replication, where the rejection
// sampler in std::normal_distribution is the bottleneck.
struct ZigguratTables {
  std::array<std::uint32_t, 128> kn;
  std::array<double, 128> wn, fn;

  ZigguratTables() {
    const double m1 = 2147483648.0;
    double dn = 3.442619855899, tn = dn;
    const double vn = 9.91256303526217e-3;
    const double q = vn / std::exp(-0.5 * dn * dn);
    kn[0] = static_cast<std::uint32_t>((dn / q) * m1);
    kn[1] = 0;
    wn[0] = q / m1;
    wn[127] = dn / m1;
    fn[0] = 1.0;
    fn[127] = std::exp(-0.5 * dn * dn);
    for (int i = 126; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
      kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
      tn = dn;
      fn[i] = std::exp(-0.5 * dn * dn);
      wn[i] = dn / m1;
    }
  }
};

inline const ZigguratTables& ziggurat_tables() {
  static const ZigguratTables tables;
  return tables;
}

}  // namespace detail

// Standard normal sampler, drop-in for std::normal_distribution(0, 1) on an
// Engine but ~3x faster in the common path.
class NormalSampler {
 public:
  double operator()(Engine& eng) {
    const auto& t = detail::ziggurat_tables();
    std::int32_t hz = static_cast<std::int32_t>(eng() >> 32);
    std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127u;
    if (static_cast<std::uint32_t>(std::abs(static_cast<std::int64_t>(hz))) <
        t.kn[iz])
      return hz * t.wn[iz];
    return slow_path(eng, hz, iz);
  }

 private:
  static double uniform(Engine& eng) {
    return (eng() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  static double slow_path(Engine& eng, std::int32_t hz, std::uint32_t iz) {
    const auto& t = detail::ziggurat_tables();
    const double r = 3.442619855899;
    for (;;) {
      double x = hz * t.wn[iz];
      if (iz == 0) {  // tail beyond r
        double y;
        do {
          x = -std::log(uniform(eng)) / r;
          y = -std::log(uniform(eng));
        } while (y + y < x * x);
        return hz > 0 ? r + x : -r - x;
      }
      if (t.fn[iz] + uniform(eng) * (t.fn[iz - 1] - t.fn[iz]) <
          std::exp(-0.5 * x * x))
        return x;
      hz = static_cast<std::int32_t>(eng() >> 32);
      iz = static_cast<std::uint32_t>(hz) & 127u;
      if (static_cast<std::uint32_t>(std::abs(static_cast<std::int64_t>(hz))) <
          t.kn[iz])
        return hz * t.wn[iz];
    }
  }
};

}  // namespace csvt::rng
