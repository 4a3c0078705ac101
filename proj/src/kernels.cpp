#include "rydsim/kernels.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

#include "rydsim/errors.hpp"
#include "rydsim/profile_tools.hpp"

namespace rydsim {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW's planner is not reentrant.
std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

double coefficient_for(InteractionLaw law, const PhysicalParams& params)
{
    return law_power(law) == 6 ? params.c6 : params.c3;
}

// ∫_0^{2π} dφ (A + B cos φ)^{-k/2} for k = 6 and k = 3, A > B ≥ 0.
double angular_integral(int power, double a, double b)
{
    if (power == 6) {
        const double diff = a * a - b * b;
        return kPi * (2.0 * a * a + b * b) / (diff * diff * std::sqrt(diff));
    }
    const double modulus = std::sqrt(2.0 * b / (a + b));
    return 4.0 * std::comp_ellint_2(modulus) / ((a - b) * std::sqrt(a + b));
}

// Tensor-product rule over (r1, φ1, r2) with the source angle φ2 integrated
// in closed form. Everything independent of Δz is precomputed.
class DistributedQuadrature {
public:
    DistributedQuadrature(InteractionLaw law, double coefficient, double separation,
                          double diameter, std::size_t order)
        : power_(law_power(law)), coefficient_(coefficient)
    {
        const TransverseMode mode(diameter);
        const double radius = mode.radius();
        const QuadratureRule radial = gauss_legendre(order, 0.0, radius);
        const std::size_t n_phi = 2 * order;
        const double dphi = kPi / static_cast<double>(n_phi);

        std::vector<double> radial_weight(order);
        for (std::size_t i = 0; i < order; ++i) {
            const double r = radial.nodes[i];
            radial_weight[i] = radial.weights[i] * r * mode.weight(r);
        }

        const std::size_t total = order * (n_phi + 1) * order;
        offset_.reserve(total);
        cross_.reserve(total);
        weight_.reserve(total);
        for (std::size_t i1 = 0; i1 < order; ++i1) {
            const double r1 = radial.nodes[i1];
            for (std::size_t p = 0; p <= n_phi; ++p) {
                const double phi = dphi * static_cast<double>(p);
                // trapezoid on [0, π], doubled for the even half [π, 2π]
                const double w_phi = (p == 0 || p == n_phi) ? dphi : 2.0 * dphi;
                const double d2 = separation * separation + r1 * r1 -
                                  2.0 * separation * r1 * std::cos(phi);
                const double d = std::sqrt(std::max(d2, 0.0));
                for (std::size_t i2 = 0; i2 < order; ++i2) {
                    const double r2 = radial.nodes[i2];
                    offset_.push_back(d2 + r2 * r2);
                    cross_.push_back(2.0 * d * r2);
                    weight_.push_back(radial_weight[i1] * w_phi * radial_weight[i2]);
                }
            }
        }
    }

    double operator()(double dz_offset) const
    {
        const double z2 = dz_offset * dz_offset;
        double sum = 0.0;
        for (std::size_t i = 0; i < weight_.size(); ++i) {
            sum += weight_[i] * angular_integral(power_, z2 + offset_[i], cross_[i]);
        }
        return coefficient_ * sum;
    }

private:
    int power_;
    double coefficient_;
    std::vector<double> offset_;
    std::vector<double> cross_;
    std::vector<double> weight_;
};

// Smallest radial order whose Δz = 0 value agrees with the next refinement
// to a tenth of the tolerance.
std::size_t select_order(InteractionLaw law, double separation, double diameter,
                         double tolerance)
{
    constexpr std::size_t kOrders[] = {6, 8, 12, 16, 24, 32, 48, 64};
    double previous =
        DistributedQuadrature(law, 1.0, separation, diameter, kOrders[0])(0.0);
    for (std::size_t i = 1; i < std::size(kOrders); ++i) {
        const double current =
            DistributedQuadrature(law, 1.0, separation, diameter, kOrders[i])(0.0);
        if (std::abs(current - previous) <= 0.1 * tolerance * std::abs(current)) {
            return kOrders[i];
        }
        previous = current;
    }
    return kOrders[std::size(kOrders) - 1];
}

void validate_geometry(InteractionLaw law, const Geometry& geom)
{
    if (is_point_law(law)) {
        if (!(geom.separation > 0.0)) {
            throw GeometryError("point interaction law needs separation a > 0");
        }
        return;
    }
    if (!(geom.diameter > 0.0)) {
        throw GeometryError("ensemble diameter must be positive");
    }
    if (geom.separation < geom.diameter) {
        throw GeometryError("overlapping cylinders: separation a = " +
                            std::to_string(geom.separation) + " um < diameter d = " +
                            std::to_string(geom.diameter) + " um");
    }
}

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string_view to_string(InteractionLaw law)
{
    switch (law) {
    case InteractionLaw::vdw: return "vdw";
    case InteractionLaw::dipole: return "dipole";
    case InteractionLaw::point_vdw: return "point_vdw";
    case InteractionLaw::point_dipole: return "point_dipole";
    }
    return "vdw";
}

InteractionLaw parse_interaction_law(std::string_view name)
{
    for (auto law : {InteractionLaw::vdw, InteractionLaw::dipole, InteractionLaw::point_vdw,
                     InteractionLaw::point_dipole}) {
        if (to_string(law) == name) {
            return law;
        }
    }
    throw ConfigError("interaction.law", "unknown interaction law '" + std::string(name) +
                                             "' (expected vdw, dipole, point_vdw, point_dipole)");
}

int law_power(InteractionLaw law)
{
    return (law == InteractionLaw::vdw || law == InteractionLaw::point_vdw) ? 6 : 3;
}

bool is_point_law(InteractionLaw law)
{
    return law == InteractionLaw::point_vdw || law == InteractionLaw::point_dipole;
}

TransverseMode::TransverseMode(double diameter) : radius_(0.5 * diameter)
{
    const double j1 = std::cyl_bessel_j(1.0, PulseSpec::nu_01);
    area_ = kPi * radius_ * radius_ * j1 * j1;
    norm_ = 1.0 / area_;
}

double TransverseMode::weight(double rho) const
{
    if (rho < 0.0 || rho > radius_) {
        return 0.0;
    }
    const double u = std::cyl_bessel_j(0.0, PulseSpec::nu_01 * rho / radius_);
    return norm_ * u * u;
}

KernelTable::KernelTable(InteractionLaw law, double separation, double diameter, double dz,
                         double coefficient, double tolerance, std::vector<double> samples)
    : law_(law),
      separation_(separation),
      diameter_(diameter),
      dz_(dz),
      coefficient_(coefficient),
      tolerance_(tolerance),
      mode_area_(TransverseMode(diameter).mode_area()),
      half_(samples.empty() ? 0 : (samples.size() - 1) / 2),
      samples_(std::move(samples))
{
    if (samples_.size() % 2 == 0) {
        throw ShapeError("kernel table needs an odd number of samples");
    }
}

double KernelTable::at(std::ptrdiff_t offset) const
{
    return samples_[static_cast<std::size_t>(offset + static_cast<std::ptrdiff_t>(half_))];
}

double distributed_kernel_value(InteractionLaw law, double coefficient, double separation,
                                double diameter, double dz_offset, std::size_t order)
{
    return DistributedQuadrature(law, coefficient, separation, diameter, order)(dz_offset);
}

KernelTable build_kernel(InteractionLaw law, const Geometry& geom, const PhysicalParams& params,
                         double dz, std::size_t cells, double tolerance)
{
    validate_geometry(law, geom);
    const double coefficient = coefficient_for(law, params);
    std::vector<double> samples(2 * cells + 1, 0.0);
    if (coefficient != 0.0) {
        std::vector<double> half(cells + 1);
        if (is_point_law(law)) {
            const double a2 = geom.separation * geom.separation;
            const double exponent = 0.5 * law_power(law);
            for (std::size_t i = 0; i <= cells; ++i) {
                const double z = dz * static_cast<double>(i);
                half[i] = coefficient / std::pow(z * z + a2, exponent);
            }
        } else {
            const std::size_t order =
                select_order(law, geom.separation, geom.diameter, tolerance);
            const DistributedQuadrature quad(law, coefficient, geom.separation,
                                             geom.diameter, order);
            for (std::size_t i = 0; i <= cells; ++i) {
                half[i] = quad(dz * static_cast<double>(i));
            }
        }
        for (std::size_t i = 0; i <= cells; ++i) {
            samples[cells + i] = half[i];
            samples[cells - i] = half[i];
        }
    }
    return KernelTable(law, geom.separation, geom.diameter, dz, coefficient, tolerance,
                       std::move(samples));
}

KernelTable build_kernel(InteractionLaw law, const Geometry& geom, const PhysicalParams& params,
                         double dz, double tolerance)
{
    const GridSpec grid{dz, 1.0, 0.0};
    return build_kernel(law, geom, params, grid.spacing(geom.length), grid.cells(geom.length),
                        tolerance);
}

std::shared_ptr<const KernelTable> shared_kernel(InteractionLaw law, const Geometry& geom,
                                                 const PhysicalParams& params, double dz,
                                                 double tolerance)
{
    using Key = std::tuple<int, double, double, double, double, double, double>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const KernelTable>> cache;

    const Key key{static_cast<int>(law), geom.separation, geom.diameter, geom.length, dz,
                  coefficient_for(law, params), tolerance};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) {
            return it->second;
        }
    }
    auto table = std::make_shared<const KernelTable>(
        build_kernel(law, geom, params, dz, tolerance));
    std::lock_guard lock(mutex);
    // Bounded: a long sweep should not accumulate every table it ever built.
    if (cache.size() >= 16) {
        cache.clear();
    }
    cache.emplace(key, table);
    return table;
}

// --- convolution -----------------------------------------------------------

struct PotentialConvolver::Impl {
    std::size_t nodes = 0;
    std::size_t size = 0;
    double scale = 0.0;  // A_mode · dz / M
    double* real = nullptr;
    fftw_complex* spectrum = nullptr;
    std::vector<cplx> kernel_spectrum;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    ~Impl()
    {
        std::lock_guard lock(fftw_planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
        if (real) fftw_free(real);
        if (spectrum) fftw_free(spectrum);
    }
};

PotentialConvolver::PotentialConvolver(const KernelTable& kernel) : impl_(std::make_unique<Impl>())
{
    Impl& im = *impl_;
    im.nodes = kernel.nodes();
    im.size = 2 * im.nodes;
    const std::size_t bins = im.size / 2 + 1;
    im.scale = kernel.mode_area() * kernel.dz() / static_cast<double>(im.size);
    {
        std::lock_guard lock(fftw_planner_mutex());
        im.real = fftw_alloc_real(im.size);
        im.spectrum = fftw_alloc_complex(bins);
        im.forward = fftw_plan_dft_r2c_1d(static_cast<int>(im.size), im.real, im.spectrum,
                                          FFTW_ESTIMATE);
        im.backward = fftw_plan_dft_c2r_1d(static_cast<int>(im.size), im.spectrum, im.real,
                                           FFTW_ESTIMATE);
    }
    // Circular layout: offsets 0..n−1 at the front, −1..−(n−1) wrapped to the back.
    std::fill(im.real, im.real + im.size, 0.0);
    const auto half = static_cast<std::ptrdiff_t>(kernel.half_width());
    for (std::ptrdiff_t i = 0; i <= half; ++i) {
        im.real[i] = kernel.at(i);
    }
    for (std::ptrdiff_t i = 1; i <= half; ++i) {
        im.real[static_cast<std::ptrdiff_t>(im.size) - i] = kernel.at(-i);
    }
    fftw_execute(im.forward);
    im.kernel_spectrum.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        im.kernel_spectrum[k] = cplx(im.spectrum[k][0], im.spectrum[k][1]);
    }
}

PotentialConvolver::~PotentialConvolver() = default;
PotentialConvolver::PotentialConvolver(PotentialConvolver&&) noexcept = default;
PotentialConvolver& PotentialConvolver::operator=(PotentialConvolver&&) noexcept = default;

void PotentialConvolver::apply(std::span<const cplx> s_other, std::span<double> out)
{
    Impl& im = *impl_;
    if (s_other.size() != im.nodes || out.size() != im.nodes) {
        throw ShapeError("potential_profile: profile has " + std::to_string(s_other.size()) +
                         " nodes, kernel expects " + std::to_string(im.nodes));
    }
    for (std::size_t i = 0; i < im.nodes; ++i) {
        im.real[i] = std::norm(s_other[i]);
    }
    std::fill(im.real + im.nodes, im.real + im.size, 0.0);
    fftw_execute(im.forward);
    const std::size_t bins = im.kernel_spectrum.size();
    for (std::size_t k = 0; k < bins; ++k) {
        const cplx v = cplx(im.spectrum[k][0], im.spectrum[k][1]) * im.kernel_spectrum[k];
        im.spectrum[k][0] = v.real();
        im.spectrum[k][1] = v.imag();
    }
    fftw_execute(im.backward);
    for (std::size_t i = 0; i < im.nodes; ++i) {
        out[i] = im.real[i] * im.scale;
    }
}

std::vector<double> potential_profile(const KernelTable& kernel, std::span<const cplx> s_other,
                                      ConvolutionMethod method)
{
    const std::size_t n = kernel.nodes();
    if (s_other.size() != n) {
        throw ShapeError("potential_profile: profile has " + std::to_string(s_other.size()) +
                         " nodes, kernel expects " + std::to_string(n));
    }
    std::vector<double> v(n, 0.0);
    if (method == ConvolutionMethod::automatic) {
        method = n > 256 ? ConvolutionMethod::fft : ConvolutionMethod::direct;
    }
    if (method == ConvolutionMethod::fft) {
        PotentialConvolver conv(kernel);
        conv.apply(s_other, v);
        return v;
    }
    const double scale = kernel.mode_area() * kernel.dz();
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += kernel.at(static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i)) *
                   std::norm(s_other[i]);
        }
        v[j] = sum * scale;
    }
    return v;
}

double homogeneity_metric(std::span<const double> v, std::span<const cplx> s_self)
{
    if (v.size() != s_self.size()) {
        throw ShapeError("homogeneity_metric: potential and spinwave grids differ");
    }
    const auto density = squared_magnitude(s_self);
    const auto mask = half_max_mask(density);
    double lo = 0.0;
    double hi = 0.0;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!mask[i]) {
            continue;
        }
        if (count == 0) {
            lo = hi = v[i];
        }
        lo = std::min(lo, v[i]);
        hi = std::max(hi, v[i]);
        sum += v[i];
        ++count;
    }
    if (count == 0) {
        throw UndefinedObservable("homogeneity_metric: spinwave is identically zero");
    }
    const double mean = sum / static_cast<double>(count);
    if (mean == 0.0) {
        return hi == lo ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return (hi - lo) / std::abs(mean);
}

// --- CSV ------------------------------------------------------------------

void write_kernel_csv(const KernelTable& kernel, std::ostream& out)
{
    out << "# rydsim kernel table\n";
    out << "# law=" << to_string(kernel.law()) << "\n";
    out << "# separation_um=" << format_double(kernel.separation()) << "\n";
    out << "# diameter_um=" << format_double(kernel.diameter()) << "\n";
    out << "# dz_um=" << format_double(kernel.dz()) << "\n";
    out << "# tolerance=" << format_double(kernel.tolerance()) << "\n";
    out << "# coefficient=" << format_double(kernel.coefficient()) << "\n";
    out << "dz_um,K_rad_per_us\n";
    const auto half = static_cast<std::ptrdiff_t>(kernel.half_width());
    for (std::ptrdiff_t i = -half; i <= half; ++i) {
        out << format_double(kernel.dz() * static_cast<double>(i)) << ','
            << format_double(kernel.at(i)) << '\n';
    }
}

KernelTable read_kernel_csv(std::istream& in)
{
    std::map<std::string, std::string> header;
    std::vector<double> samples;
    std::string line;
    bool seen_columns = false;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                header[line.substr(2, eq - 2)] = line.substr(eq + 1);
            }
            continue;
        }
        if (!seen_columns) {
            seen_columns = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw IoError("kernel CSV: malformed row '" + line + "'");
        }
        samples.push_back(std::stod(line.substr(comma + 1)));
    }
    for (const char* key : {"law", "separation_um", "diameter_um", "dz_um", "tolerance",
                            "coefficient"}) {
        if (!header.count(key)) {
            throw IoError(std::string("kernel CSV: missing header field ") + key);
        }
    }
    return KernelTable(parse_interaction_law(header["law"]), std::stod(header["separation_um"]),
                       std::stod(header["diameter_um"]), std::stod(header["dz_um"]),
                       std::stod(header["coefficient"]), std::stod(header["tolerance"]),
                       std::move(samples));
}

}  // namespace rydsim
