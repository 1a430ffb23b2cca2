// SPDX-License-Identifier: Apache-2.0
//
// nlosia: NLOS radar imaging embedded in a base-station beam sweep
// Copyright (C) 2026 The nlosia authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "nlosia/oracle.hpp"

#include "nlosia/csv.hpp"
#include "nlosia/pipeline.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <limits>
#include <random>

namespace nlosia
{

namespace
{

std::mt19937_64 oracle_engine(std::uint64_t seed, std::uint32_t stream, std::uint32_t index = 0)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream, index};
    return std::mt19937_64(seq);
}

double rel_error(double expected, double measured) { return std::abs(measured - expected) / std::abs(expected); }

OracleRow rel_row(std::string label, double expected, double measured, double tol)
{
    OracleRow r{std::move(label), expected, measured, rel_error(expected, measured), false};
    r.pass = r.error <= tol;
    return r;
}

std::string case_label(PolarPoint t, double a_eff)
{
    return fmt::format("R={:.3f} psi={:.2f}deg A={:.3f}", t.radius, rad2deg(t.angle), a_eff);
}

OracleReport finish(OracleReport rep)
{
    rep.passed = !rep.rows.empty() && std::all_of(rep.rows.begin(), rep.rows.end(), [](auto &r) { return r.pass; });
    return rep;
}

OracleReport coverage_oracle(const OracleConfig &cfg)
{
    OracleReport rep;
    rep.kind = OracleKind::CoverageVsClosedForm;
    rep.tolerance = 0.02;
    const OfdmConfig ofdm = OfdmConfig::with_bandwidth(15e9, 200e6, 2);
    auto eng = oracle_engine(cfg.seed, 0x434f5652u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int c = 0; c < cfg.cases; ++c)
    {
        const double r0 = 5.0 + 55.0 * u01(eng);
        // Off boresight the closed form follows F+ alone, so those cases stay in moderate near field.
        const bool boresight = c % 5 == 0;
        const double psi0 = boresight ? 0.0 : deg2rad(-30.0 + 60.0 * u01(eng));
        const double a_max =
            boresight ? 1.6 * r0 : 2.0 * r0 * std::tan(std::acos(1.0 - 0.3 * ofdm.bandwidth() / ofdm.carrier_frequency));
        const double a_eff = a_max * (0.05 + 0.95 * u01(eng));
        const PolarPoint t{r0, psi0};
        const auto closed = nf_resolution(t, a_eff, ofdm);
        const auto cov = resolution_from_coverage(spectral_coverage(t, -0.5 * a_eff, 0.5 * a_eff, ofdm));
        const std::string label = case_label(t, a_eff);
        rep.rows.push_back(rel_row(label + " rho_R", closed.rho_R_nf, cov.rho_R_nf, rep.tolerance));
        rep.rows.push_back(rel_row(label + " rho_psi", closed.rho_psi_nf, cov.rho_psi_nf, rep.tolerance));
    }
    return finish(rep);
}

OracleReport saf_oracle(const OracleConfig &cfg)
{
    OracleReport rep;
    rep.kind = OracleKind::SafVsClosedForm;
    rep.tolerance = 0.10;
    auto cases = resolution_case_grid();
    if (cfg.cases < static_cast<int>(cases.size()))
        cases.resize(static_cast<std::size_t>(std::max(cfg.cases, 1)));
    for (const auto &[t, a] : cases)
    {
        const auto tw = three_way_resolution(t, a, resolution_ofdm(), cfg.threads);
        const std::string label = case_label(t, a);
        rep.rows.push_back(rel_row(label + " rho_R", tw.closed_form.rho_R_nf, tw.measured.rho_R_nf, rep.tolerance));
        rep.rows.push_back(
            rel_row(label + " rho_psi", tw.closed_form.rho_psi_nf, tw.measured.rho_psi_nf, rep.tolerance));
    }
    return finish(rep);
}

// Direct double sum over atom pairs with each atom phase evaluated independently.
Complex brute_gain(const ReflectorDesign &design, const SceneGeometry &geom, const BeamIllumination &beam, Vec2 p)
{
    const double k = kTwoPi / design.wavelength;
    const double xl = beam.incidence_x();
    const double d_o = (p - Vec2{xl, 0.0}).norm();
    const double u = (p.x - xl) / d_o;
    const double g = k * (p.y / d_o) * (p.y / d_o) / (2.0 * d_o);
    std::vector<Complex> a;
    for (int m = beam.first_atom(); m < beam.last_atom(); ++m)
    {
        const double x = design.atom_positions[m];
        const double delta = x - xl;
        const double phase = design.meta_atom_phases[m] - k * (incidence_distance(x, geom) - beam.incidence_distance()) +
                             k * u * delta - g * delta * delta;
        a.push_back(std::polar(1.0, phase));
    }
    Complex s{0.0, 0.0};
    for (const Complex &x : a)
        for (const Complex &y : a)
            s += x * y;
    return s;
}

OracleReport gain_oracle(const OracleConfig &cfg)
{
    OracleReport rep;
    rep.kind = OracleKind::GainBruteforce;
    rep.tolerance = 1e-10;
    auto eng = oracle_engine(cfg.seed, 0x4741494eu);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int c = 0; c < cfg.cases; ++c)
    {
        Scenario s = reference_scenario(0.4 + 1.2 * u01(eng));
        s.reflector.kind = std::array{DesignKind::ModularLinear, DesignKind::Lens, DesignKind::Mirror}[c % 3];
        if (s.reflector.kind != DesignKind::ModularLinear)
            s.reflector.modules = 1;
        const SensingSystem sys = build_system(s);
        const int b = static_cast<int>(u01(eng) * sys.beam_count()) % sys.beam_count();
        const auto &beam = sys.beam(b);
        const Vec2 lo = s.geometry.roi.lower(), hi = s.geometry.roi.upper();
        const Vec2 p{lo.x + (hi.x - lo.x) * u01(eng), lo.y + (hi.y - lo.y) * u01(eng)};
        const Complex fast = beam.gain(p);
        const Complex slow = brute_gain(sys.design(), sys.geometry(), beam, p);
        const double scale = static_cast<double>(beam.atom_count()) * beam.atom_count();
        OracleRow r{fmt::format("{} beam {} at x={:.3f} y={:.3f}", to_string(s.reflector.kind), b, p.x, p.y),
                    std::abs(slow), std::abs(fast), std::abs(fast - slow) / scale, false};
        r.pass = r.error <= rep.tolerance;
        rep.rows.push_back(r);
    }
    return finish(rep);
}

OracleReport crb_oracle(const OracleConfig &cfg)
{
    OracleReport rep;
    rep.kind = OracleKind::CrbMonteCarlo;
    rep.tolerance = 3.0;
    TargetState t;
    t.position = {15.0, 0.0};
    t.velocity_radial = 1.0;
    t.velocity_transverse = 1.0;
    const Scenario s = with_per_beam_snr(reference_scenario(), t, cfg.snr_db);
    const auto mc = velocity_monte_carlo(s, t, cfg.trials, cfg.seed, cfg.threads);
    for (auto [label, crb, rmse] : {std::tuple{"v_radial rmse/crb", mc.crb_v_radial, mc.rmse_v_radial},
                                    std::tuple{"v_transverse rmse/crb", mc.crb_v_transverse, mc.rmse_v_transverse}})
    {
        OracleRow r{label, crb, rmse, rmse / crb, false};
        r.pass = r.error >= 1.0 && r.error <= rep.tolerance;
        rep.rows.push_back(r);
    }
    return finish(rep);
}

} // namespace

const char *to_string(OracleKind kind)
{
    switch (kind)
    {
    case OracleKind::CoverageVsClosedForm:
        return "coverage_vs_closed_form";
    case OracleKind::SafVsClosedForm:
        return "saf_vs_closed_form";
    case OracleKind::GainBruteforce:
        return "gain_bruteforce";
    case OracleKind::CrbMonteCarlo:
        return "crb_montecarlo";
    }
    return "";
}

OracleKind parse_oracle_kind(const std::string &name)
{
    for (auto k : {OracleKind::CoverageVsClosedForm, OracleKind::SafVsClosedForm, OracleKind::GainBruteforce,
                   OracleKind::CrbMonteCarlo})
        if (name == to_string(k))
            return k;
    throw Error("oracle: unknown kind '" + name +
                "' (expected coverage_vs_closed_form, saf_vs_closed_form, gain_bruteforce or crb_montecarlo)");
}

OracleReport run_oracle(OracleKind kind, const OracleConfig &config)
{
    if (config.cases < 1 || config.trials < 2)
        throw Error("oracle: cases must be positive and trials at least 2");
    switch (kind)
    {
    case OracleKind::CoverageVsClosedForm:
        return coverage_oracle(config);
    case OracleKind::SafVsClosedForm:
        return saf_oracle(config);
    case OracleKind::GainBruteforce:
        return gain_oracle(config);
    case OracleKind::CrbMonteCarlo:
        return crb_oracle(config);
    }
    throw Error("oracle: unknown kind");
}

void write_oracle_csv(const std::filesystem::path &path, const OracleReport &report)
{
    CsvWriter w(path, {"oracle", "case", "expected", "measured", "error", "tolerance", "pass"});
    for (const auto &r : report.rows)
    {
        w.cell(to_string(report.kind)).cell(r.label).cell(r.expected).cell(r.measured).cell(r.error);
        w.cell(report.tolerance).cell(r.pass ? 1 : 0);
        w.end_row();
    }
}

OfdmConfig resolution_ofdm() { return OfdmConfig::with_bandwidth(15e9, 100e6, 2); }

std::vector<std::pair<PolarPoint, double>> resolution_case_grid()
{
    std::vector<std::pair<PolarPoint, double>> out;
    // Boresight from strong near field to far field, then off-boresight cases.
    for (double r0 : {4.0, 8.0, 16.0, 32.0, 64.0})
        for (double a : {0.5, 1.5, 3.0})
            out.push_back({{r0, 0.0}, a});
    for (double psi_deg : {-20.0, 15.0, 30.0})
        for (double r0 : {8.0, 16.0, 32.0})
            out.push_back({{r0, deg2rad(psi_deg)}, 1.0});
    return out;
}

Scenario resolution_scenario(PolarPoint target, double a_eff, const OfdmConfig &cfg)
{
    // Distant BS keeps the incidence span narrow, so footprints and beam density stay uniform.
    const double bs_height = 20.0;
    const double incidence = deg2rad(30.0);
    const double lambda = cfg.wavelength();
    const auto closed = nf_resolution(target, a_eff, cfg);
    const Vec2 c = target.to_cartesian();
    double side = std::max(4.0 * closed.rho_R_nf, 4.0 * target.radius * closed.rho_psi_nf);
    side = std::min(side, 1.5 * c.y);
    Scenario s;
    s.name = "resolution";
    s.seed = 1;
    s.ofdm = cfg;
    s.geometry = SceneGeometry::from_incidence(bs_height, incidence, a_eff, Box{c, {side, side}});
    // Footprint at most a fifth of the aperture over the whole incidence span.
    const double d_x = bs_height * std::tan(incidence);
    const double theta_lo = std::atan((d_x - 0.5 * a_eff) / bs_height);
    const double sc = std::sin(theta_lo) * std::cos(theta_lo);
    const double a_bs = 5.0 * bs_height * lambda / (a_eff * sc * std::cos(theta_lo));
    s.array = BsArray::for_aperture(std::max(0.4, a_bs), lambda);
    s.reflector.kind = DesignKind::Lens;
    s.reflector.modules = 1;
    s.reflector.focus = c;
    s.synthesis.noise = false;
    return s;
}

ThreeWayResolution three_way_resolution(PolarPoint target, double a_eff, const OfdmConfig &cfg, int threads)
{
    ThreeWayResolution tw;
    tw.target = target;
    tw.a_eff = a_eff;
    tw.closed_form = nf_resolution(target, a_eff, cfg);
    tw.coverage = resolution_from_coverage(spectral_coverage(target, -0.5 * a_eff, 0.5 * a_eff, cfg));
    const Scenario s = resolution_scenario(target, a_eff, cfg);
    const SensingSystem sys = build_system(s);
    const double rr = tw.closed_form.rho_R_nf, rp = tw.closed_form.rho_psi_nf;
    const GridSpec grid = GridSpec::polar(target.radius, 2.5 * rr, rr / 8.0, target.angle, 2.5 * rp, rp / 8.0);
    BackprojectOptions o;
    o.threads = threads;
    tw.measured = measured_resolution(saf(sys, target, grid, o));
    tw.measured.a_eff_used = a_eff;
    return tw;
}

Scenario reference_scenario(double reflector_length, double carrier)
{
    Scenario s;
    s.name = "reference";
    s.seed = 1;
    const bool fr2 = carrier > 20e9;
    s.ofdm = OfdmConfig::with_bandwidth(carrier, fr2 ? 400e6 : 200e6, fr2 ? 3 : 2);
    const double rho_r = kSpeedOfLight / (2.0 * s.ofdm.bandwidth());
    const double side = 10.0 * rho_r;
    s.geometry = SceneGeometry::from_incidence(5.0, deg2rad(20.0), reflector_length, Box{{0.0, 15.0}, {side, side}});
    s.array = BsArray::for_aperture(0.4, s.ofdm.wavelength());
    s.reflector.kind = DesignKind::ModularLinear;
    s.reflector.modules = std::max(1, static_cast<int>(std::lround(reflector_length / 0.08)));
    return s;
}

Scenario with_per_beam_snr(Scenario scenario, const TargetState &target, double snr_db)
{
    const SensingSystem sys = build_system(scenario);
    const auto snr = per_beam_snr(sys, target);
    const auto mask = effective_beam_mask(sys, target.position, scenario.imaging.gain_floor_db);
    double sum = 0.0;
    int n = 0;
    for (std::size_t b = 0; b < snr.size(); ++b)
        if (mask[b])
        {
            sum += snr[b];
            ++n;
        }
    if (n == 0 || !(sum > 0.0))
        throw Error("snr: target is not illuminated by any effective beam");
    scenario.ofdm.tx_power *= from_db10(snr_db) / (sum / n);
    return scenario;
}

namespace
{

double sample_variance(const std::vector<double> &x)
{
    double n = 0.0, m = 0.0, q = 0.0;
    for (double v : x)
        if (!std::isnan(v))
        {
            n += 1.0;
            m += v;
            q += v * v;
        }
    return n > 1.0 ? (q - m * m / n) / (n - 1.0) : std::numeric_limits<double>::quiet_NaN();
}

// Centered sub-run of track with slots re-referenced to its middle sample.
PhaseTrack centered_sub_run(const PhaseTrack &track, int length)
{
    const int n = static_cast<int>(track.beam_indices.size());
    const int start = (n - length) / 2;
    const int origin = track.beam_indices[start + length / 2];
    PhaseTrack out;
    for (int i = start; i < start + length; ++i)
    {
        out.beam_indices.push_back(track.beam_indices[i] - origin);
        out.unwrapped_phase.push_back(track.unwrapped_phase[i]);
        out.weights.push_back(track.weights[i]);
    }
    out.unwrap_failure = track.unwrap_failure;
    return out;
}

} // namespace

VelocityMonteCarlo velocity_monte_carlo(const Scenario &scenario, const TargetState &target, int trials,
                                        std::uint64_t seed, int threads, std::span<const int> sub_run_lengths)
{
    if (trials < 2)
        throw Error("velocity monte-carlo: at least two trials are required");
    const SensingSystem sys = build_system(scenario);
    const std::array<TargetState, 1> scene{target};
    BackprojectOptions opts = backproject_options(scenario);
    opts.threads = 1;
    // Only the anchor pixel is evaluated, so the direct sum beats a full FFT per beam.
    opts.exact_range_sum = true;

    // Bound from the true per-beam SNR on the estimator's sample set.
    SynthesisOptions quiet = scenario.synthesis;
    quiet.noise = false;
    const EchoTensor clean = synthesize(sys, scene, seed, quiet);
    PhaseTrack truth_track = track_at(BackProjector(sys, clean, opts), target.position);
    const auto snr = per_beam_snr(sys, target);
    double snr_sum = 0.0;
    for (std::size_t i = 0; i < truth_track.beam_indices.size(); ++i)
    {
        const int b = truth_track.beam_indices[i] + sys.beam_count() / 2;
        truth_track.weights[i] = 1.0 / (2.0 * snr[b]);
        snr_sum += snr[b];
    }
    const double v_sweep = sweep_velocity(sys.codebook(), sys.geometry(), sys.ofdm().slot_duration());
    const VelocityEstimate bound = fit_velocity(truth_track, target.position, v_sweep, sys.ofdm());
    const int track_length = static_cast<int>(truth_track.beam_indices.size());
    std::vector<int> lengths;
    for (int len : sub_run_lengths)
        if (len >= 3 && len <= track_length)
            lengths.push_back(len);

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> err_r(trials, nan), err_t(err_r), a1(err_r), a2(err_r);
    std::vector<std::vector<double>> sub_a1(lengths.size(), err_r), sub_a2(sub_a1);
    detail::parallel_for(trials, threads, [&](int t0, int t1) {
        for (int t = t0; t < t1; ++t)
        {
            auto eng = oracle_engine(seed, 0x56454c4fu, static_cast<std::uint32_t>(t));
            const EchoTensor echoes = synthesize(sys, scene, eng(), scenario.synthesis);
            try
            {
                const PhaseTrack track = track_at(BackProjector(sys, echoes, opts), target.position);
                const VelocityEstimate e = fit_velocity(track, target.position, v_sweep, sys.ofdm());
                err_r[t] = e.v_radial - target.velocity_radial;
                err_t[t] = e.v_transverse - target.velocity_transverse;
                a1[t] = e.a1;
                a2[t] = e.a2;
                for (std::size_t k = 0; k < lengths.size(); ++k)
                {
                    if (lengths[k] > static_cast<int>(track.beam_indices.size()))
                        continue;
                    const VelocityEstimate s =
                        fit_velocity(centered_sub_run(track, lengths[k]), target.position, v_sweep, sys.ofdm());
                    sub_a1[k][t] = s.a1;
                    sub_a2[k][t] = s.a2;
                }
            }
            catch (const Error &)
            {
                err_r[t] = nan;
            }
        }
    });
    VelocityMonteCarlo mc;
    mc.effective_samples = track_length;
    mc.per_sample_snr_db = track_length > 0 ? to_db10(snr_sum / track_length) : 0.0;
    mc.crb_v_radial = std::sqrt(bound.crb.xx);
    mc.crb_v_transverse = std::sqrt(bound.crb.yy);
    double sr = 0.0, st = 0.0, br = 0.0, bt = 0.0;
    for (int t = 0; t < trials; ++t)
    {
        if (std::isnan(err_r[t]))
        {
            ++mc.failures;
            continue;
        }
        ++mc.trials;
        sr += err_r[t] * err_r[t];
        st += err_t[t] * err_t[t];
        br += err_r[t];
        bt += err_t[t];
    }
    if (mc.trials == 0)
        throw Error("velocity monte-carlo: every trial failed");
    mc.rmse_v_radial = std::sqrt(sr / mc.trials);
    mc.rmse_v_transverse = std::sqrt(st / mc.trials);
    mc.bias_v_radial = br / mc.trials;
    mc.bias_v_transverse = bt / mc.trials;
    mc.var_a1 = sample_variance(a1);
    mc.var_a2 = sample_variance(a2);
    for (std::size_t k = 0; k < lengths.size(); ++k)
        mc.sub_runs.push_back({lengths[k], sample_variance(sub_a1[k]), sample_variance(sub_a2[k])});
    return mc;
}

} // namespace nlosia
