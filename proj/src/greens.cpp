#include "viscowave/greens.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "viscowave/dispersion.hpp"
#include "viscowave/error.hpp"

namespace viscowave::greens {

namespace {

using cplx = std::complex<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct Channel {
    double x;
    int n;
};

struct Request {
    const Medium* medium;
    const RelaxationKernel* kernel;
    std::vector<Channel> channels;
    int m = 0;
    double sigma = 0.0;
    double dt = 0.0;
    std::size_t nt = 0;
    double t_max = 0.0;
};

struct Synthesis {
    std::vector<std::vector<double>> values;  // one per channel, on the user grid
    GreenMetadata meta;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Smallest integer >= n with no prime factors other than 2, 3, 5, 7, forced even.
std::size_t nice_size(std::size_t n) {
    for (std::size_t k = std::max<std::size_t>(n + (n & 1U), 2);; k += 2) {
        std::size_t r = k;
        for (std::size_t f : {2U, 3U, 5U, 7U}) {
            while (r % f == 0) {
                r /= f;
            }
        }
        if (r == 1) {
            return k;
        }
    }
}

bool bounded_attenuation(const RelaxationKernel& kernel) {
    switch (kernel.family()) {
        case KernelFamily::prony:
            return true;
        case KernelFamily::cole_cole:
            return std::get<ColeColeParams>(kernel.params()).a == 1.0;
        case KernelFamily::custom_measure:
            return std::isfinite(kernel.K0prime());
        default:
            return false;
    }
}

template <class F>
void parallel_for(std::size_t n, F&& body) {
    const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, std::max<std::size_t>(1, n / 4096));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) {
                    body(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

// Spectrum of one channel at p = eps - i w, without the taper.
cplx channel_value(const cplx& kap, const cplx& p, int m, const Channel& ch) {
    cplx v = kap / (2.0 * p * p) * std::exp(-kap * ch.x);
    for (int i = 0; i < m; ++i) {
        v *= p;
    }
    for (int i = 0; i < ch.n; ++i) {
        v *= -kap;
    }
    return v;
}

cplx taper(const cplx& p, double sigma) {
    return sigma > 0.0 ? std::exp(p * p / (2.0 * sigma * sigma)) : cplx(1.0);
}

// Highest frequency that must be synthesized.
double spectral_cutoff(const Request& rq, double eps, double tol) {
    const int order = rq.m + std::max_element(rq.channels.begin(), rq.channels.end(), [](auto& a, auto& b) {
                                 return a.n < b.n;
                             })->n;
    double cap = kInf;
    if (rq.sigma > 0.0) {
        cap = rq.sigma * std::sqrt(2.0 * (-std::log(tol)) + 6.0 * order);
    }
    const double xmin = std::min_element(rq.channels.begin(), rq.channels.end(), [](auto& a, auto& b) {
                            return a.x < b.x;
                        })->x;
    const Channel probe{xmin, rq.channels.front().n};
    double peak = 0.0;
    int quiet = 0;
    for (double w = 1e-3 / rq.t_max; w < 1e300; w *= 2.0) {
        if (w > cap) {
            return cap;
        }
        const cplx p(eps, -w);
        const cplx kap = dispersion::kappa(*rq.medium, *rq.kernel, p);
        const double mag = w * std::abs(channel_value(kap, p, rq.m, probe) * taper(p, rq.sigma));
        if (!std::isfinite(mag)) {
            continue;
        }
        peak = std::max(peak, mag);
        quiet = (mag <= tol * peak) ? quiet + 1 : 0;
        if (quiet >= 3) {
            return w;
        }
    }
    throw ConvergenceError("green synthesis: spectrum does not decay; a source taper sigma_s > 0 is required", 0.0,
                           kInf);
}

Synthesis synthesize_once(const Request& rq, double omega_max, std::size_t qq, std::size_t N,
                          const SynthesisOptions& opts) {
    const double h = rq.dt / static_cast<double>(qq);
    if (N > opts.max_fft_size) {
        throw DomainError("green synthesis: needs " + std::to_string(N) + " FFT points (limit " +
                          std::to_string(opts.max_fft_size) +
                          "); increase sigma_s, or reduce t_max or the time resolution");
    }
    const double T = static_cast<double>(N) * h;
    const double eps = 18.0 / T;
    const double dw = kTwoPi / T;
    const std::size_t half = N / 2;

    // Shared part of every channel: kappa and the taper.
    std::vector<cplx> kap(half + 1), base(half + 1);
    parallel_for(half + 1, [&](std::size_t k) {
        const double w = dw * static_cast<double>(k);
        if (w > omega_max * (1.0 + 1e-12)) {
            kap[k] = 0.0;
            base[k] = 0.0;
            return;
        }
        const cplx p(eps, -w);
        kap[k] = dispersion::kappa(*rq.medium, *rq.kernel, p);
        base[k] = taper(p, rq.sigma);
    });

    Synthesis out;
    out.values.resize(rq.channels.size());
    std::vector<cplx> buf(N);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(N), reinterpret_cast<fftw_complex*>(buf.data()),
                                reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    double imag_residue = 0.0;
    for (std::size_t c = 0; c < rq.channels.size(); ++c) {
        const Channel ch = rq.channels[c];
        parallel_for(half + 1, [&](std::size_t k) {
            if (base[k] == 0.0) {
                buf[k] = 0.0;
                return;
            }
            const cplx p(eps, -dw * static_cast<double>(k));
            buf[k] = channel_value(kap[k], p, rq.m, ch) * base[k];
        });
        // Hermitian completion: negative frequencies are conjugates; the Nyquist
        // bin stands for the pair +-w and keeps only its real part.
        buf[half] = buf[half].real();
        for (std::size_t k = 1; k < half; ++k) {
            buf[N - k] = std::conj(buf[k]);
        }
        fftw_execute(plan);
        auto& v = out.values[c];
        v.resize(rq.nt);
        double vmax = 0.0, imax = 0.0;
        for (std::size_t i = 0; i < rq.nt; ++i) {
            const std::size_t j = i * qq;
            const double t = static_cast<double>(j) * h;
            const double scale = std::exp(eps * t) / T;
            v[i] = buf[j].real() * scale;
            vmax = std::max(vmax, std::abs(v[i]));
            imax = std::max(imax, std::abs(buf[j].imag() * scale));
        }
        if (vmax > 0.0) {
            imag_residue = std::max(imag_residue, imax / vmax);
        }
    }
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    out.meta.omega_max = omega_max;
    out.meta.contour_shift = eps;
    out.meta.fft_period = T;
    out.meta.fft_step = h;
    out.meta.fft_size = N;
    out.meta.imag_residue = imag_residue;
    return out;
}

Synthesis synthesize(const Request& rq, const SynthesisOptions& opts) {
    const double t_min_period = std::max(4.0 * rq.t_max, 2.0 * rq.t_max + (rq.sigma > 0.0 ? 60.0 / rq.sigma : 0.0));
    const double omega_max = spectral_cutoff(rq, 18.0 / t_min_period, opts.envelope_tol);
    const std::size_t q = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(rq.dt * omega_max / std::numbers::pi - 1e-12)));
    const double h = rq.dt / static_cast<double>(q);
    const double needed = std::ceil(t_min_period / h);
    if (needed > static_cast<double>(opts.max_fft_size)) {
        throw DomainError("green synthesis: needs about " + fmt(needed) + " FFT points (limit " +
                          std::to_string(opts.max_fft_size) +
                          "); increase sigma_s, or reduce t_max or the time resolution");
    }
    const std::size_t N = nice_size(static_cast<std::size_t>(needed));
    Synthesis s = synthesize_once(rq, omega_max, q, N, opts);
    if (opts.check_aliasing && 2 * N <= opts.max_fft_size) {
        const Synthesis d = synthesize_once(rq, omega_max, q, 2 * N, opts);
        double diff = 0.0, vmax = 0.0;
        for (std::size_t c = 0; c < s.values.size(); ++c) {
            for (std::size_t i = 0; i < rq.nt; ++i) {
                diff = std::max(diff, std::abs(s.values[c][i] - d.values[c][i]));
                vmax = std::max(vmax, std::abs(s.values[c][i]));
            }
        }
        s.meta.aliasing_change = vmax > 0.0 ? diff / vmax : 0.0;
    }
    return s;
}

Request make_request(const Medium& medium, const RelaxationKernel& kernel, std::span<const double> t_grid,
                     double sigma_s) {
    if (t_grid.size() < 2) {
        throw DomainError("green: the time grid needs at least two samples");
    }
    if (t_grid.front() != 0.0) {
        throw DomainError("green: the time grid must start at t = 0");
    }
    const double dt = t_grid[1] - t_grid[0];
    if (!(dt > 0.0)) {
        throw DomainError("green: the time grid must be increasing");
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (std::abs(t_grid[i] - dt * static_cast<double>(i)) > 1e-9 * dt * static_cast<double>(i + 1)) {
            throw DomainError("green: the time grid must be uniform");
        }
    }
    if (!(sigma_s >= 0.0) || !std::isfinite(sigma_s)) {
        throw DomainError("green: sigma_s must be finite and >= 0");
    }
    if (sigma_s == 0.0 && bounded_attenuation(kernel)) {
        throw DomainError(
            "green: the attenuation is bounded, so the raw spectrum does not decay; supply a source taper sigma_s > 0");
    }
    Request rq;
    rq.medium = &medium;
    rq.kernel = &kernel;
    rq.sigma = sigma_s;
    rq.dt = dt;
    rq.nt = t_grid.size();
    rq.t_max = t_grid.back();
    return rq;
}

GreenField make_field(int dim, double position, std::span<const double> t_grid, double sigma_s, const Medium& medium,
                      const RelaxationKernel& kernel) {
    GreenField f;
    f.dim = dim;
    f.position = position;
    f.t.assign(t_grid.begin(), t_grid.end());
    f.sigma_s = sigma_s;
    f.meta.C0 = dispersion::wavefront_speed(medium, kernel);
    f.meta.predicted_arrival = position * dispersion::slowness(medium, kernel);
    return f;
}

void copy_meta(GreenField& f, const GreenMetadata& m) {
    const double C0 = f.meta.C0;
    const double arr = f.meta.predicted_arrival;
    f.meta = m;
    f.meta.C0 = C0;
    f.meta.predicted_arrival = arr;
}

}  // namespace

std::vector<double> uniform_grid(double t_max, std::size_t nt) {
    if (!(t_max > 0.0) || nt < 2) {
        throw DomainError("uniform_grid: need t_max > 0 and nt >= 2");
    }
    std::vector<double> t(nt);
    const double dt = t_max / static_cast<double>(nt - 1);
    for (std::size_t i = 0; i < nt; ++i) {
        t[i] = dt * static_cast<double>(i);
    }
    return t;
}

GreenField green_1d(const Medium& medium, const RelaxationKernel& kernel, double x, std::span<const double> t_grid,
                    double sigma_s, const SynthesisOptions& opts) {
    if (!(x > 0.0)) {
        throw DomainError("green_1d: x must be > 0");
    }
    Request rq = make_request(medium, kernel, t_grid, sigma_s);
    rq.channels = {{x, 0}};
    Synthesis s = synthesize(rq, opts);
    GreenField f = make_field(1, x, t_grid, sigma_s, medium, kernel);
    copy_meta(f, s.meta);
    f.values = std::move(s.values.front());
    return f;
}

GreenField green_derivatives(const Medium& medium, const RelaxationKernel& kernel, double x,
                             std::span<const double> t_grid, int m, int n, double sigma_s,
                             const SynthesisOptions& opts) {
    if (!(x > 0.0)) {
        throw DomainError("green_derivatives: x must be > 0");
    }
    if (m < 0 || n < 0 || m + n > 4) {
        throw DomainError("green_derivatives: need m, n >= 0 and m + n <= 4");
    }
    if (!(sigma_s > 0.0)) {
        throw DomainError("green_derivatives: a source taper sigma_s > 0 is mandatory");
    }
    Request rq = make_request(medium, kernel, t_grid, sigma_s);
    rq.m = m;
    rq.channels = {{x, n}};
    Synthesis s = synthesize(rq, opts);
    GreenField f = make_field(1, x, t_grid, sigma_s, medium, kernel);
    copy_meta(f, s.meta);
    f.meta.time_order = m;
    f.meta.space_order = n;
    f.values = std::move(s.values.front());
    return f;
}

GreenField green_3d(const Medium& medium, const RelaxationKernel& kernel, double r, std::span<const double> t_grid,
                    double sigma_s, const SynthesisOptions& opts) {
    if (!(r > 0.0)) {
        throw DomainError("green_3d: r must be > 0");
    }
    const double hrel = opts.radial_step;
    if (!(hrel > 0.0) || hrel >= 0.25) {
        throw DomainError("green_3d: radial step must lie in (0, 0.25)");
    }
    Request rq = make_request(medium, kernel, t_grid, sigma_s);
    rq.channels = {{r * (1.0 + hrel), 0}, {r * (1.0 - hrel), 0}, {r * (1.0 + 2.0 * hrel), 0},
                   {r * (1.0 - 2.0 * hrel), 0}, {r, 1}};
    Synthesis s = synthesize(rq, opts);
    // The radial step shifts the field by about r h / c; far below the
    // resolved time scale the difference is pure cancellation.
    const double c_ref = dispersion::static_speed(medium, kernel);
    if (s.meta.omega_max * r * hrel / c_ref < 1e-9) {
        throw DomainError("green_3d: radial step " + fmt(r * hrel) + " m underflows the synthesized resolution");
    }
    GreenField f = make_field(3, r, t_grid, sigma_s, medium, kernel);
    copy_meta(f, s.meta);
    f.values.resize(rq.nt);
    const double pref = -1.0 / (kTwoPi * r);
    double diff = 0.0, amax = 0.0;
    for (std::size_t i = 0; i < rq.nt; ++i) {
        const double d1 = (s.values[0][i] - s.values[1][i]) / (2.0 * r * hrel);
        const double d2 = (s.values[2][i] - s.values[3][i]) / (4.0 * r * hrel);
        const double dq = (4.0 * d1 - d2) / 3.0;
        f.values[i] = pref * dq;
        diff = std::max(diff, std::abs(dq - s.values[4][i]));
        amax = std::max(amax, std::abs(s.values[4][i]));
    }
    f.meta.crosscheck = amax > 0.0 ? diff / amax : 0.0;
    return f;
}

ArrivalReport arrival_diagnostics(const GreenField& field, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw DomainError("arrival_diagnostics: threshold must lie in (0, 1)");
    }
    const double Br = field.meta.predicted_arrival;
    if (!(Br > 0.0)) {
        throw DomainError("arrival_diagnostics: the field has no finite wavefront (B = 0)");
    }
    double vmax = 0.0;
    for (double v : field.values) {
        vmax = std::max(vmax, std::abs(v));
    }
    if (!(vmax > 0.0)) {
        throw DomainError("arrival_diagnostics: the field is identically zero");
    }
    ArrivalReport rep;
    rep.predicted_arrival = Br;
    std::size_t ia = field.values.size();
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        if (std::abs(field.values[i]) > threshold * vmax) {
            ia = i;
            break;
        }
    }
    rep.arrival = field.t[ia];
    double ped = 0.0;
    for (std::size_t i = 0; i < ia; ++i) {
        if (field.t[i] >= Br) {
            ped = std::max(ped, std::abs(field.values[i]));
        }
    }
    rep.pedestal_flatness = ped / vmax;
    rep.delay = rep.arrival - Br;
    return rep;
}

}  // namespace viscowave::greens
