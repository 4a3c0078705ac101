#include "doctest.h"

#include <array>
#include <numbers>
#include <cmath>
#include <sstream>

#include "rydsim/errors.hpp"
#include "rydsim/linear_response.hpp"
#include "rydsim/units.hpp"

using namespace rydsim;
using cd = std::complex<double>;

namespace {

PhysicalParams params(double gamma, double dp)
{
    PhysicalParams p;
    p.gamma = gamma;
    p.delta_p = dp;
    p.delta_c = -dp;
    p.g_sqrt_n = 5e4;
    p.density_n = 20.0;
    return p;
}

// Drives (P, S) with a unit probe at offset δ and integrates to the steady
// state with classic RK4; χ = γ P / D.
cd rk4_steady_chi(double gamma, double dp, double w, double omega, double delta)
{
    const cd a00 = -cd(gamma, dp - delta);
    const cd a01(0.0, omega);
    const cd a11(0.0, -(w - delta));
    const cd drive(0.0, 1.0);
    auto rhs = [&](const std::array<cd, 2>& x) {
        return std::array<cd, 2>{a00 * x[0] + a01 * x[1] + drive, a01 * x[0] + a11 * x[1]};
    };
    std::array<cd, 2> x{};
    const double h = 0.01 / gamma;
    for (int n = 0; n < 400000; ++n) {
        auto axpy = [&](const std::array<cd, 2>& k, double s) {
            return std::array<cd, 2>{x[0] + s * k[0], x[1] + s * k[1]};
        };
        const auto k1 = rhs(x);
        const auto k2 = rhs(axpy(k1, 0.5 * h));
        const auto k3 = rhs(axpy(k2, 0.5 * h));
        const auto k4 = rhs(axpy(k3, h));
        x[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        x[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        if (n % 1000 == 999) {
            const auto r = rhs(x);
            if (std::abs(r[0]) + std::abs(r[1]) < 1e-13) {
                break;
            }
        }
    }
    return gamma * x[0];
}

}  // namespace

TEST_CASE("transparency on two-photon resonance")
{
    const PhysicalParams p = params(units::mhz(5.75), units::mhz(5.0 * 5.75));
    const double omega = units::mhz(1.5);
    CHECK(std::abs(susceptibility(0.0, 0.0, p, omega)) < 1e-12);
    // bare two-level peak is normalized to one
    CHECK(susceptibility(p.delta_p, 0.0, p, 0.0).imag() == doctest::Approx(1.0));
    CHECK_THROWS_AS(susceptibility(0.0, 0.0, params(0.0, 0.0), omega), DomainError);
}

TEST_CASE("large shifts restore two-level absorption")
{
    const double g = 1.0;
    const PhysicalParams p = params(g, 5.0);
    for (double delta : {-3.0, 0.0, 2.0, 5.0}) {
        const cd two_level = cd(0.0, g) / cd(g, p.delta_p - delta);
        const cd chi = susceptibility(delta, -1e9, p, 1.0);
        CHECK(std::abs(chi - two_level) < 1e-8);
    }
}

TEST_CASE("closed form matches the RK4 steady state")
{
    const double g = 1.0;
    int checked = 0;
    for (double dp : {-2.0, 0.0, 3.0}) {
        const PhysicalParams p = params(g, dp);
        for (int iv = 0; iv < 10; ++iv) {
            const double v = -2.0 + 0.4 * iv + 0.05;
            for (int id = 0; id < 10; ++id) {
                const double delta = -3.0 + 0.6 * id + 0.013;
                const double omega = 1.5;
                const cd ref = rk4_steady_chi(g, dp, v + p.two_photon_detuning(), omega, delta);
                const cd chi = susceptibility(delta, v, p, omega);
                CHECK(std::abs(chi - ref) < 1e-6);
                ++checked;
            }
        }
    }
    CHECK(checked == 300);
}

TEST_CASE("absorption is non-negative and peaks at the dressed resonances")
{
    const double g = 1.0;
    for (double dp : {-5.0, 0.0, 5.0}) {
        const PhysicalParams p = params(g, dp);
        for (double v : {-3.0, 0.0, 0.7}) {
            const auto peaks = peak_positions(v, p, 2.0);
            REQUIRE(peaks.size() == 2);
            CHECK(peaks[0] < peaks[1]);
            for (double d : peaks) {
                const double w = v + p.two_photon_detuning();
                CHECK((dp - d) * (w - d) == doctest::Approx(4.0).epsilon(1e-10));
                CHECK(susceptibility(d, v, p, 2.0).imag() == doctest::Approx(1.0).epsilon(1e-9));
            }
            for (double d = -20.0; d <= 20.0; d += 0.037) {
                CHECK(susceptibility(d, v, p, 2.0).imag() >= 0.0);
            }
        }
    }
}

TEST_CASE("Kramers-Kronig consistency")
{
    const double g = 1.0;
    const PhysicalParams p = params(g, 0.0);
    const double omega = 2.0;
    const double lo = -2000.0;
    const double hi = 2000.0;
    const double h = 0.005;
    const auto n = static_cast<std::size_t>((hi - lo) / h);
    std::vector<double> im(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        im[i] = susceptibility(lo + i * h, 0.3, p, omega).imag();
    }
    for (double delta : {-3.1, -1.02, 0.51, 2.53}) {
        // subtract the singular part, then trapezoid
        const double f0 = susceptibility(delta, 0.3, p, omega).imag();
        double sum = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            const double x = lo + i * h;
            const double wt = (i == 0 || i == n) ? 0.5 : 1.0;
            if (std::abs(x - delta) > 1e-12) {
                sum += wt * (im[i] - f0) / (x - delta);
            }
        }
        sum *= h;
        sum += f0 * std::log((hi - delta) / (delta - lo));
        const double re = sum / std::numbers::pi;
        CHECK(re == doctest::Approx(susceptibility(delta, 0.3, p, omega).real()).epsilon(0.02));
    }
}

TEST_CASE("EIT window and group velocity")
{
    const double gamma = units::mhz(5.75);
    const PhysicalParams p = params(gamma, 0.0);
    const double omega = units::mhz(2.0);
    const EitWindow w = eit_window_and_vg(p, omega);
    CHECK(susceptibility(w.half_width, 0.0, p, omega).imag() == doctest::Approx(0.5).epsilon(1e-10));
    for (double f = 0.05; f < 1.0; f += 0.05) {
        CHECK(susceptibility(f * w.half_width, 0.0, p, omega).imag() < 0.5);
    }
    CHECK(w.group_velocity ==
          doctest::Approx(units::kLightSpeed * omega * omega / (p.g_sqrt_n * p.g_sqrt_n)));
    CHECK(eit_window_and_vg(p, 2.0 * omega).group_velocity ==
          doctest::Approx(4.0 * w.group_velocity).epsilon(1e-12));

    const PhysicalParams off = params(gamma, 5.0 * gamma);
    const EitWindow wo = eit_window_and_vg(off, omega);
    CHECK(wo.half_width > 0.0);
    CHECK(susceptibility(wo.half_width, 0.0, off, omega).imag() == doctest::Approx(0.5).epsilon(1e-8));
    for (double f = 0.02; f < 1.0; f += 0.02) {
        CHECK(susceptibility(f * wo.half_width, 0.0, off, omega).imag() < 0.5);
    }
    CHECK_THROWS_AS(eit_window_and_vg(p, 0.0), DomainError);
}

TEST_CASE("susceptibility curve CSV")
{
    const PhysicalParams p = params(1.0, 5.0);
    const auto curve = susceptibility_curve(p, 1.5, -0.45, -15.0, 15.0, 301);
    REQUIRE(curve.delta.size() == 301);
    CHECK(curve.delta.front() == -15.0);
    CHECK(curve.delta.back() == doctest::Approx(15.0));
    std::ostringstream out;
    write_curve_csv(curve, out);
    const std::string text = out.str();
    CHECK(text.rfind("# ", 0) == 0);
    CHECK(text.find("delta,re_chi,im_chi\n") != std::string::npos);
    std::size_t lines = 0;
    for (char c : text) {
        lines += c == '\n';
    }
    CHECK(lines >= 302);
}
