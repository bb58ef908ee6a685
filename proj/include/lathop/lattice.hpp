// Self-similar nested integer lattices: quantization, mod reduction, dither
// sampling, codebook and list-region enumeration.
//
// All lattices here are scaled integer lattices a*Z^n, chained by integer
// factors.  The fundamental region is the half-open cube [-a/2, a/2)^n and
// exact half cells quantize upward, so every coset has a unique
// representative and every boundary case is deterministic.  Volumes and
// second moments are closed-form, which keeps every identity in the test
// suite exact.
#ifndef LATHOP_LATTICE_HPP
#define LATHOP_LATTICE_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lathop/common.hpp"
#include "lathop/rng.hpp"

namespace lathop {

template <typename Scalar = double>
class ScaledLattice {
 public:
  ScaledLattice(Eigen::Index dim, Scalar scale) : dim_(dim), scale_(scale) {
    if (dim < 1) throw ConfigError("lattice dimension must be >= 1");
    if (!(scale > Scalar(0))) throw ConfigError("lattice scale must be positive");
  }

  Eigen::Index dim() const { return dim_; }
  Scalar scale() const { return scale_; }

  /// Volume of the fundamental region, scale^dim.
  Scalar volume() const { return std::pow(scale_, static_cast<Scalar>(dim_)); }
  Scalar log2_volume() const { return static_cast<Scalar>(dim_) * std::log2(scale_); }

  /// Per-dimension second moment of the uniform law on the cube, scale^2/12.
  Scalar second_moment() const { return scale_ * scale_ / Scalar(12); }

 private:
  Eigen::Index dim_;
  Scalar scale_;
};

namespace detail {

template <typename Scalar>
void check_dim(const ScaledLattice<Scalar>& lat, Eigen::Index size, const char* op) {
  if (size != lat.dim()) {
    throw InputError(std::string(op) + ": vector length " + std::to_string(size) +
                     " does not match lattice dimension " + std::to_string(lat.dim()));
  }
}

// Integer coordinate of the nearest multiple of `spacing`; exact halves
// round upward so that x - q*spacing lands in [-spacing/2, spacing/2).
template <typename Scalar>
std::int64_t nearest_coord(Scalar x, Scalar spacing) {
  return static_cast<std::int64_t>(std::floor(x / spacing + Scalar(0.5)));
}

}  // namespace detail

/// Nearest lattice point, componentwise scale*floor(x/scale + 1/2).
template <typename Derived>
ArrayX<typename Derived::Scalar> nearest_point(
    const ScaledLattice<typename Derived::Scalar>& lat, const Eigen::ArrayBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::check_dim(lat, x.size(), "nearest_point");
  return lat.scale() * (x.derived() / lat.scale() + Scalar(0.5)).floor();
}

/// x reduced into the fundamental region: x - nearest_point(x), componentwise
/// in [-scale/2, scale/2).
template <typename Derived>
ArrayX<typename Derived::Scalar> mod_lattice(const ScaledLattice<typename Derived::Scalar>& lat,
                                             const Eigen::ArrayBase<Derived>& x) {
  detail::check_dim(lat, x.size(), "mod_lattice");
  return x.derived() - nearest_point(lat, x);
}

/// Integer lattice coordinates of the nearest lattice point, floor(x/scale + 1/2).
template <typename Derived>
ArrayXi64 nearest_coords(const ScaledLattice<typename Derived::Scalar>& lat,
                         const Eigen::ArrayBase<Derived>& x) {
  detail::check_dim(lat, x.size(), "nearest_coords");
  ArrayXi64 out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out[i] = detail::nearest_coord(x.derived()[i], lat.scale());
  }
  return out;
}

/// Membership test with relative tolerance: distance to the nearest lattice
/// point, measured against max(scale, |x|).
template <typename Derived>
bool contains(const ScaledLattice<typename Derived::Scalar>& lat,
              const Eigen::ArrayBase<Derived>& x,
              typename Derived::Scalar rtol = typename Derived::Scalar(1e-9)) {
  using Scalar = typename Derived::Scalar;
  detail::check_dim(lat, x.size(), "contains");
  const Scalar ref = std::max(lat.scale(), x.derived().abs().maxCoeff());
  return (x.derived() - nearest_point(lat, x)).abs().maxCoeff() <= rtol * ref;
}

/// Dither uniform on the fundamental cube; the cube factorizes so each
/// component is iid uniform on [-scale/2, scale/2).
template <typename Scalar>
ArrayX<Scalar> sample_dither(const ScaledLattice<Scalar>& lat, RandomStream& rng) {
  ArrayX<Scalar> out(lat.dim());
  for (Eigen::Index i = 0; i < lat.dim(); ++i) {
    out[i] = lat.scale() * static_cast<Scalar>(rng.uniform() - 0.5);
  }
  return out;
}

enum class Codebook { message, quant };

/// Nested chain of three self-similar lattices: coarse (shaping) with scale
/// a, fine (message) with scale a/k1, quantization with scale a/(k1*k2).
/// Coarse scale is set from the power budget: a = sqrt(12*power) so the
/// coarse second moment equals `power`.
template <typename Scalar = double>
class NestedChain {
 public:
  NestedChain(Eigen::Index dim, int k1, int k2, Scalar power)
      : coarse_(dim, std::sqrt(Scalar(12) * check_power(power))),
        fine_(dim, coarse_.scale() / Scalar(check_k1(k1))),
        quant_(dim, coarse_.scale() / Scalar(std::int64_t(k1) * check_k2(k2))),
        k1_(k1),
        k2_(k2) {}

  Eigen::Index dim() const { return coarse_.dim(); }
  const ScaledLattice<Scalar>& coarse() const { return coarse_; }
  const ScaledLattice<Scalar>& fine() const { return fine_; }
  const ScaledLattice<Scalar>& quant() const { return quant_; }

  int k1() const { return k1_; }
  int k2() const { return k2_; }
  int radix(Codebook which) const { return which == Codebook::message ? k1_ : k1_ * k2_; }
  const ScaledLattice<Scalar>& sublattice(Codebook which) const {
    return which == Codebook::message ? fine_ : quant_;
  }

  /// Message rate log2(k1), bits per dimension.
  Scalar message_rate() const { return std::log2(Scalar(k1_)); }
  /// Quantization-codebook rate log2(k1*k2), bits per dimension.
  Scalar quant_rate() const { return std::log2(Scalar(k1_) * Scalar(k2_)); }
  /// Per-dimension nesting ratio of (coarse, fine).
  Scalar nesting_ratio() const { return Scalar(k1_); }
  Scalar quant_second_moment() const { return quant_.second_moment(); }

 private:
  static Scalar check_power(Scalar p) {
    if (!(p > Scalar(0))) throw ConfigError("chain power must be positive");
    return p;
  }
  static int check_k1(int k1) {
    if (k1 < 2) throw ConfigError("nesting factor k1 must be >= 2");
    return k1;
  }
  static int check_k2(int k2) {
    if (k2 < 1) throw ConfigError("nesting factor k2 must be >= 1");
    return k2;
  }

  ScaledLattice<Scalar> coarse_, fine_, quant_;
  int k1_, k2_;
};

template <typename Scalar = double>
NestedChain<Scalar> build_chain(Eigen::Index n, int k1, int k2, Scalar power) {
  return NestedChain<Scalar>(n, k1, k2, power);
}

// --- coset digits ---------------------------------------------------------
//
// A sublattice point j*spacing reduced mod the coarse lattice is labelled by
// the digit j mod k on each axis, k the per-axis nesting radix.  Digit 0 is
// the origin; the representative of digit d inside [-a/2, a/2) is d for
// small d and d - k past the wrap threshold.

inline int coset_digit(std::int64_t j, int radix) {
  std::int64_t r = j % radix;
  if (r < 0) r += radix;
  return static_cast<int>(r);
}

/// Integer coordinate of digit d's representative, in [-(radix/2), ...].
inline std::int64_t digit_rep(int d, int radix) {
  return d < radix - radix / 2 ? d : d - radix;
}

inline std::size_t default_enumeration_cap() { return std::size_t(1) << 20; }

/// Number of codewords k^n, guarded against the enumeration cap.
template <typename Scalar>
std::size_t codebook_size(const NestedChain<Scalar>& chain, Codebook which,
                          std::size_t cap = default_enumeration_cap()) {
  const double k = static_cast<double>(chain.radix(which));
  if (static_cast<double>(chain.dim()) * std::log2(k) > std::log2(static_cast<double>(cap)) + 1e-9) {
    throw CapacityError("codebook of " + std::to_string(chain.radix(which)) + "^" +
                        std::to_string(chain.dim()) + " points exceeds enumeration cap " +
                        std::to_string(cap));
  }
  std::size_t total = 1;
  for (Eigen::Index i = 0; i < chain.dim(); ++i) total *= static_cast<std::size_t>(chain.radix(which));
  return total;
}

/// Codeword of the given digits: per-axis representative times the
/// sublattice spacing.  Always lies inside the coarse fundamental cube.
template <typename Scalar>
ArrayX<Scalar> codebook_point(const NestedChain<Scalar>& chain, Codebook which,
                              const Digits& digits) {
  detail::check_dim(chain.coarse(), digits.size(), "codebook_point");
  const int k = chain.radix(which);
  const Scalar spacing = chain.sublattice(which).scale();
  ArrayX<Scalar> out(digits.size());
  for (Eigen::Index i = 0; i < digits.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= k) throw InputError("codebook digit out of range");
    out[i] = static_cast<Scalar>(digit_rep(digits[i], k)) * spacing;
  }
  return out;
}

/// Digits of the sublattice point nearest to x, reduced mod the coarse
/// lattice.  This is the one-shot "quantize then reduce" decode step.
template <typename Derived>
Digits decode_digits(const NestedChain<typename Derived::Scalar>& chain, Codebook which,
                     const Eigen::ArrayBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::check_dim(chain.coarse(), x.size(), "decode_digits");
  const int k = chain.radix(which);
  const Scalar spacing = chain.sublattice(which).scale();
  Digits out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out[i] = coset_digit(detail::nearest_coord(x.derived()[i], spacing), k);
  }
  return out;
}

inline std::size_t digits_to_linear(const Digits& digits, int radix) {
  std::size_t idx = 0;
  for (Eigen::Index i = digits.size() - 1; i >= 0; --i) {
    idx = idx * static_cast<std::size_t>(radix) + static_cast<std::size_t>(digits[i]);
  }
  return idx;
}

inline Digits linear_to_digits(std::size_t index, int radix, Eigen::Index n) {
  Digits out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = static_cast<int>(index % static_cast<std::size_t>(radix));
    index /= static_cast<std::size_t>(radix);
  }
  return out;
}

/// All k^n coset representatives inside the coarse cube, as columns, in
/// linear-index order.  codebook_point(linear_to_digits(i)) is column i.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> enumerate_codebook(
    const NestedChain<Scalar>& chain, Codebook which,
    std::size_t cap = default_enumeration_cap()) {
  const std::size_t total = codebook_size(chain, which, cap);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> points(chain.dim(), total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    points.col(idx) =
        codebook_point(chain, which, linear_to_digits(idx, chain.radix(which), chain.dim()))
            .matrix();
  }
  return points;
}

// --- list regions ----------------------------------------------------------
//
// The list region around a point y is the translated fine cell
// y + [-a_c/2, a_c/2)^n.  On each axis it contains exactly k2 consecutive
// quantization-lattice points; the window is identified by its low corner.

template <typename Scalar, typename Derived>
ArrayXi64 region_low_corner(const NestedChain<Scalar>& chain, const Eigen::ArrayBase<Derived>& center) {
  detail::check_dim(chain.coarse(), center.size(), "region_low_corner");
  const Scalar ac = chain.fine().scale();
  const Scalar aq = chain.quant().scale();
  ArrayXi64 low(center.size());
  for (Eigen::Index i = 0; i < center.size(); ++i) {
    low[i] = static_cast<std::int64_t>(std::ceil((center.derived()[i] - ac / Scalar(2)) / aq));
  }
  return low;
}

/// Quantization-coset digits of the list window's low corner.
template <typename Scalar, typename Derived>
Digits region_index(const NestedChain<Scalar>& chain, const Eigen::ArrayBase<Derived>& center) {
  const ArrayXi64 low = region_low_corner(chain, center);
  const int k = chain.radix(Codebook::quant);
  Digits out(low.size());
  for (Eigen::Index i = 0; i < low.size(); ++i) out[i] = coset_digit(low[i], k);
  return out;
}

/// Coset digits of the k2^n list members for the window with the given low
/// corner digits.
template <typename Scalar>
std::vector<Digits> list_members(const NestedChain<Scalar>& chain, const Digits& low_digits,
                                 std::size_t cap = default_enumeration_cap()) {
  detail::check_dim(chain.coarse(), low_digits.size(), "list_members");
  const int k = chain.radix(Codebook::quant);
  const int k2 = chain.k2();
  const Eigen::Index n = chain.dim();
  double log2_total = static_cast<double>(n) * std::log2(static_cast<double>(k2));
  if (log2_total > std::log2(static_cast<double>(cap)) + 1e-9) {
    throw CapacityError("list of k2^n points exceeds enumeration cap");
  }
  std::size_t total = 1;
  for (Eigen::Index i = 0; i < n; ++i) total *= static_cast<std::size_t>(k2);

  std::vector<Digits> members;
  members.reserve(total);
  Digits offsets = Digits::Zero(n);
  for (std::size_t count = 0; count < total; ++count) {
    Digits m(n);
    for (Eigen::Index i = 0; i < n; ++i) m[i] = coset_digit(low_digits[i] + offsets[i], k);
    members.push_back(std::move(m));
    for (Eigen::Index i = 0; i < n; ++i) {  // mixed-radix increment
      if (++offsets[i] < k2) break;
      offsets[i] = 0;
    }
  }
  return members;
}

/// Quantization-lattice points inside center + [-a_c/2, a_c/2)^n, reduced
/// mod the coarse lattice, as columns.  Exactly k2^n points for any center.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> enumerate_fine_in_region(
    const NestedChain<Scalar>& chain, const Eigen::ArrayBase<Derived>& center,
    std::size_t cap = default_enumeration_cap()) {
  const std::vector<Digits> members = list_members(chain, region_index(chain, center), cap);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> points(chain.dim(), members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    points.col(i) = codebook_point(chain, Codebook::quant, members[i]).matrix();
  }
  return points;
}

}  // namespace lathop

#endif  // LATHOP_LATTICE_HPP
