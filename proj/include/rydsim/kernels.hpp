#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rydsim/core_model.hpp"
#include "rydsim/profile_tools.hpp"

namespace rydsim {

enum class InteractionLaw {
    vdw,           ///< C6/r⁶ averaged over both cylinders' transverse modes
    dipole,        ///< C3/r³ averaged over both cylinders' transverse modes
    point_vdw,     ///< C6/(Δz² + a²)³, spinwave shrunk onto the axis
    point_dipole,  ///< C3/(Δz² + a²)^{3/2}
};

std::string_view to_string(InteractionLaw law);
/// Throws ConfigError for unknown names.
InteractionLaw parse_interaction_law(std::string_view name);

/// Power k of the 1/r^k law.
int law_power(InteractionLaw law);
bool is_point_law(InteractionLaw law);

/// Normalized radial weight of the J0 transverse mode on a disk of
/// diameter d: w(ρ) ∝ J0(2ν01ρ/d)², ∫ w 2πρ dρ = 1.
class TransverseMode {
public:
    explicit TransverseMode(double diameter);

    double radius() const noexcept { return radius_; }
    /// w(ρ); zero outside the disk.
    double weight(double rho) const;
    /// ∫|u|² d²ρ for the axis-normalized amplitude u = J0(2ν01ρ/d).
    /// Converts on-axis |S|² (µm⁻³) into a linear excitation density (µm⁻¹).
    double mode_area() const noexcept { return area_; }

private:
    double radius_;
    double norm_;
    double area_;
};

/// Effective 1D interaction kernel K(Δz) between the two ensembles, in rad/µs
/// per excitation, sampled on Δz = i·dz for i ∈ [−cells, cells].
class KernelTable {
public:
    KernelTable(InteractionLaw law, double separation, double diameter, double dz,
                double coefficient, double tolerance, std::vector<double> samples);

    InteractionLaw law() const noexcept { return law_; }
    double separation() const noexcept { return separation_; }
    double diameter() const noexcept { return diameter_; }
    double dz() const noexcept { return dz_; }
    double coefficient() const noexcept { return coefficient_; }
    double tolerance() const noexcept { return tolerance_; }
    /// Transverse mode area folded into potential_profile.
    double mode_area() const noexcept { return mode_area_; }
    std::size_t half_width() const noexcept { return half_; }
    /// Number of grid nodes this table serves (cells + 1).
    std::size_t nodes() const noexcept { return half_ + 1; }

    /// K at Δz = offset·dz, offset ∈ [−half_width, half_width].
    double at(std::ptrdiff_t offset) const;
    const std::vector<double>& samples() const noexcept { return samples_; }

private:
    InteractionLaw law_;
    double separation_;
    double diameter_;
    double dz_;
    double coefficient_;
    double tolerance_;
    double mode_area_;
    std::size_t half_;
    std::vector<double> samples_;
};

inline constexpr double kDefaultKernelTolerance = 1e-4;

/// Builds K on Δz ∈ [−cells·dz, cells·dz].
/// Distributed laws need a ≥ d, point laws a > 0 (GeometryError otherwise).
KernelTable build_kernel(InteractionLaw law, const Geometry& geom, const PhysicalParams& params,
                         double dz, std::size_t cells,
                         double tolerance = kDefaultKernelTolerance);

/// Same, with cells = ceil(L/dz) and the node spacing L/cells.
KernelTable build_kernel(InteractionLaw law, const Geometry& geom, const PhysicalParams& params,
                         double dz, double tolerance = kDefaultKernelTolerance);

/// Memoized build_kernel; identical inputs share one immutable table.
std::shared_ptr<const KernelTable> shared_kernel(InteractionLaw law, const Geometry& geom,
                                                 const PhysicalParams& params, double dz,
                                                 double tolerance = kDefaultKernelTolerance);

/// Single-point evaluation of the distributed kernel, used by build_kernel.
/// `order` is the Gauss–Legendre order in each radial coordinate.
double distributed_kernel_value(InteractionLaw law, double coefficient, double separation,
                                double diameter, double dz_offset, std::size_t order);

enum class ConvolutionMethod { direct, fft, automatic };

/// V(z_j) = Σ_i K(z_j − z_i) · A_mode |S(z_i)|² · dz.
std::vector<double> potential_profile(const KernelTable& kernel, std::span<const cplx> s_other,
                                      ConvolutionMethod method = ConvolutionMethod::automatic);

/// Reusable transform-based convolver for the stepping loop.
class PotentialConvolver {
public:
    explicit PotentialConvolver(const KernelTable& kernel);
    ~PotentialConvolver();
    PotentialConvolver(const PotentialConvolver&) = delete;
    PotentialConvolver& operator=(const PotentialConvolver&) = delete;
    PotentialConvolver(PotentialConvolver&&) noexcept;
    PotentialConvolver& operator=(PotentialConvolver&&) noexcept;

    /// Writes V into `out`; sizes must equal kernel.nodes().
    void apply(std::span<const cplx> s_other, std::span<double> out);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// (max V − min V) / |mean V| over the half-maximum support of |s_self|².
/// Throws UndefinedObservable for an all-zero spinwave.
double homogeneity_metric(std::span<const double> v, std::span<const cplx> s_self);

/// CSV with a commented header (law, a, d, dz, tolerance, coefficient).
void write_kernel_csv(const KernelTable& kernel, std::ostream& out);
KernelTable read_kernel_csv(std::istream& in);

}  // namespace rydsim
