// svehdr: simulate, calibrate, reconstruct and evaluate SVE HDR captures.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "svehdr/calib.hpp"
#include "svehdr/io.hpp"
#include "svehdr/linearize.hpp"
#include "svehdr/metrics.hpp"
#include "svehdr/simcam.hpp"
#include "svehdr/sve.hpp"

namespace fs = std::filesystem;
using namespace svehdr;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kIo = 3, kCalibration = 4, kMismatch = 5 };

constexpr const char* kOutputRootEnv = "SVEHDR_OUTPUT_ROOT";

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
    return dir;
}

void echo_config(const CLI::App& cmd, const fs::path& out) {
    io::write_text(out / "config.ini", "[" + cmd.get_name() + "]\n" + cmd.config_to_str(true, false));
}

std::optional<Rect> parse_rect(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const auto regions = io::decode_regions("x,y,w,h\n" + s + "\n");
    return regions.front();
}

/// Options shared by every subcommand that interprets a mosaic.
struct SensorFlags {
    double lambda = 625.0;
    int eol = kDefaultEol;
    int bits = 12;
    std::string layout = "RGGB";
    std::string green = "average";

    void add(CLI::App& cmd, bool with_lambda = true, bool with_eol = true) {
        if (with_lambda) cmd.add_option("--lambda", lambda, "Illuminant dominant wavelength, nm")->capture_default_str();
        if (with_eol) cmd.add_option("--eol", eol, "End of linearity, DN")->capture_default_str();
        cmd.add_option("--bits", bits, "Raw sample bit depth")->check(CLI::Range(1, 16))->capture_default_str();
        cmd.add_option("--layout", layout, "2x2 CFA pattern")->capture_default_str();
        cmd.add_option("--green-policy", green, "average | first | second")->capture_default_str();
    }
};

// --- simulate -----------------------------------------------------------------

struct SimulateArgs {
    SensorFlags sensor;
    bool flatfield = false;
    bool chart = false;
    int exposures = 20;
    double t_min = 0.37;
    double t_max = 37.0;
    double shutter_step = 0.001;
    std::vector<double> chart_exposures{1.0};
    int width = 512;
    int height = 512;
    int chart_width = 512;
    int chart_height = 256;
    int steps = 8;
    double contrast = 128.0;
    double level = 1.0;
    double gain = 1000.0;
    double read_noise = 0.0;
    bool shot_noise = false;
    bool shoulder = false;
    std::uint64_t seed = 0;
    std::string out;
};

std::vector<double> exposure_sweep(const SimulateArgs& a) {
    if (a.exposures < 2) throw InvalidArgument("--exposures must be at least 2");
    if (!(a.t_min > 0.0) || !(a.t_max > a.t_min)) throw InvalidArgument("need 0 < --t-min < --t-max");
    if (a.shutter_step < 0.0) throw InvalidArgument("--shutter-step must be >= 0");
    std::vector<double> ts;
    for (int i = 0; i < a.exposures; ++i) {
        double t = a.t_min * std::pow(a.t_max / a.t_min, static_cast<double>(i) / (a.exposures - 1));
        if (a.shutter_step > 0.0) t = static_cast<double>(std::llround(t / a.shutter_step)) * a.shutter_step;
        if (!(t > 0.0) || (!ts.empty() && !(t > ts.back())))
            throw InvalidArgument(fmt::format("--shutter-step {} collapses exposures near {} s", a.shutter_step, t));
        ts.push_back(t);
    }
    return ts;
}

SensorModel sensor_model(const SimulateArgs& a) {
    SensorModel s;
    s.gain = a.gain;
    s.eol = a.sensor.eol;
    s.bit_depth = a.sensor.bits;
    s.read_noise_sigma = a.read_noise;
    s.shot_noise = a.shot_noise;
    s.shoulder = a.shoulder;
    s.seed = a.seed;
    s.validate();
    return s;
}

void render_series(const Scene& scene, const SensorModel& sensor, const CfaLayout& layout, const PixelRoles& roles,
                   const std::vector<double>& times, const fs::path& out, const std::string& prefix,
                   const std::string& manifest_name) {
    std::vector<io::ManifestEntry> manifest;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const std::string name = fmt::format("{}_{:03}.pgm", prefix, i);
        io::write_raw16(expose(scene, sensor, layout, roles, times[i]), out / name);
        manifest.push_back({times[i], name});
    }
    io::write_manifest(manifest, out / manifest_name);
    fmt::print("{}\n", (out / manifest_name).string());
}

int run_simulate(const CLI::App& cmd, const SimulateArgs& a) {
    if (!a.flatfield && !a.chart) throw InvalidArgument("choose --flatfield and/or --chart");
    const PixelRoles roles = roles_for_wavelength(a.sensor.lambda);
    const CfaLayout layout = CfaLayout::parse(a.sensor.layout);
    const SensorModel sensor = sensor_model(a);
    const fs::path out = prepare_dir(a.out);

    if (a.flatfield) {
        const auto times = exposure_sweep(a);
        render_series(make_flatfield(a.level, a.width, a.height), sensor, layout, roles, times, out, "flat",
                      "manifest.csv");
    }
    if (a.chart) {
        std::vector<double> times = a.chart_exposures;
        for (std::size_t i = 0; i < times.size(); ++i)
            if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1])))
                throw InvalidArgument("--chart-exposures must be positive and strictly increasing");
        TestChart chart = make_test_chart(a.chart_width, a.chart_height, a.steps, a.contrast);
        for (auto& e : chart.scene.irradiance.pixels()) e *= a.level;
        io::write_regions(chart.regions, out / "regions.csv");
        render_series(chart.scene, sensor, layout, roles, times, out, "chart", "chart_manifest.csv");
    }
    echo_config(cmd, out);
    return kOk;
}

// --- calibrate ----------------------------------------------------------------

struct CalibrateArgs {
    SensorFlags sensor;
    std::string manifest;
    std::string roi;
    CalibrationOptions fit;
    std::string alpha_grid = "dense";
    std::size_t min_entries = 8;
    double min_decades = 2.0;
    std::string out;
};

int run_calibrate(const CLI::App& cmd, CalibrateArgs a) {
    const PixelRoles roles = roles_for_wavelength(a.sensor.lambda);
    const CfaLayout layout = CfaLayout::parse(a.sensor.layout);
    a.fit.alpha_grid = alpha_grid_from_string(a.alpha_grid);
    const auto green = green_policy_from_string(a.sensor.green);
    const auto roi = parse_rect(a.roi);

    const ExposureSeries series = io::load_series(a.manifest, a.sensor.bits);
    series.require_coverage(a.min_entries, a.min_decades);
    const RadiometricFunction rf = measure_radiometric(series, roi, layout, roles, a.sensor.eol, green);
    for (const auto& w : rf.warnings) fmt::print(stderr, "warning: {}\n", w);

    const CalibrationResult result = calibrate(rf, roles, a.sensor.eol, a.fit);
    for (const auto& w : result.warnings) fmt::print(stderr, "warning: {}\n", w);

    const fs::path out = prepare_dir(a.out);
    io::write_profile(result.profile, out / "profile.json");
    io::write_text(out / "radiometric.csv", io::encode_radiometric(rf));
    echo_config(cmd, out);

    const auto& lin = result.profile.linear;
    fmt::print("linear: a = {:.6f} DN/s, b = {:.6f} DN, rms = {:.4g} DN\n", lin.a, lin.b, lin.residual_rms);
    for (std::size_t i = 0; i < result.diagnostics.size(); ++i) {
        const auto& d = result.diagnostics[i];
        const auto& s = result.profile.segments[i];
        fmt::print("{}: {} samples, f(T) order {} rms {:.4g} DN, alpha(v) order {} on v in [{:.1f}, {:.1f}]\n",
                   to_string(d.tier), d.samples, d.poly_order, d.poly_rms, d.alpha_order, s.alpha_of_value.domain_lo,
                   s.alpha_of_value.domain_hi);
    }
    fmt::print("{}\n", (out / "profile.json").string());
    return kOk;
}

// --- reconstruct ----------------------------------------------------------------

struct ReconstructArgs {
    SensorFlags sensor;
    std::optional<int> eol;
    std::string frame;
    std::string profile;
    std::string domain_policy = "clamp";
    double noise_floor = 1.0;
    bool preview = false;
    std::string out;
};

int run_reconstruct(const CLI::App& cmd, const ReconstructArgs& a) {
    const CorrectionProfile profile = io::read_profile(a.profile);
    if (a.eol && *a.eol != profile.eol)
        throw ProfileMismatch(fmt::format("frame eol {} does not match profile eol {}", *a.eol, profile.eol));
    const CfaLayout layout = CfaLayout::parse(a.sensor.layout);
    const auto green = green_policy_from_string(a.sensor.green);
    const auto policy = domain_policy_from_string(a.domain_policy);

    const RawFrame frame = io::read_raw16(a.frame, a.sensor.bits);
    const SveImage sve = construct(decompose(frame, layout, profile.roles, green), a.eol.value_or(profile.eol));
    const LinearHdrImage hdr = linearize(sve, profile, policy);

    const fs::path out = prepare_dir(a.out);
    const std::string stem = fs::path(a.frame).stem().string();
    io::write_hdr(hdr, out / (stem + ".sveh"));
    io::write_file(out / (stem + "_sve.pgm"), io::encode_pgm16(sve.values));
    if (a.preview) io::write_file(out / (stem + "_preview.pgm"), io::encode_preview8(hdr));
    echo_config(cmd, out);

    const UsageFractions u = usage_fractions(sve);
    fmt::print("usage: main {:.4f}, extra1 {:.4f}, extra2 {:.4f}, unrecoverable {:.4f}\n", u.main, u.extra1,
               u.extra2, u.unrecoverable);
    if (hdr.valid_count() > 0)
        fmt::print("dynamic range: {:.2f} dB\n", dynamic_range_db(hdr, a.noise_floor));
    else
        fmt::print("dynamic range: n/a (no valid pixel)\n");
    fmt::print("{}\n", (out / (stem + ".sveh")).string());
    return kOk;
}

// --- evaluate ---------------------------------------------------------------------

struct EvaluateArgs {
    std::string reconstructed;
    std::string reference;
    std::string sve;
    std::string regions;
    int eol = kDefaultEol;
    double scale = 1.0;
    double exposure = 0.0;
    double noise_floor = 1.0;
    int white_index = 0;
    std::string csv;
    std::string out;
};

int run_evaluate(const EvaluateArgs& a) {
    const LinearHdrImage rec = io::read_hdr(a.reconstructed);
    const LinearHdrImage ref = io::read_hdr(a.reference);
    const SveImage sve = sve_from_values(io::decode_pgm16(io::read_file(a.sve)), a.eol);
    const auto regions = io::read_regions(a.regions);

    const EvaluationRecord rec_row =
        evaluate_run(rec, ref, sve, regions, a.scale, a.exposure, {a.noise_floor, a.white_index});
    const fs::path csv = a.csv.empty() ? prepare_dir(a.out) / "metrics.csv" : fs::path(a.csv);
    io::append_evaluation(rec_row, csv);

    fmt::print("nrms {:.6f}, dynamic range {:.2f} dB\n", rec_row.nrms, rec_row.dynamic_range_db);
    fmt::print("usage: main {:.4f}, extra1 {:.4f}, extra2 {:.4f}, unrecoverable {:.4f}\n", rec_row.usage.main,
               rec_row.usage.extra1, rec_row.usage.extra2, rec_row.usage.unrecoverable);
    std::string ratios;
    for (double r : rec_row.halftone.ratios) ratios += fmt::format(" {:.4f}", r);
    fmt::print("halftone ratios:{}\n", ratios);
    fmt::print("{}\n", csv.string());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-shot HDR from oversaturated Bayer frames under narrow-band light", "svehdr"};
    app.set_config("--config", "", "INI/TOML file with default option values; flags take precedence");
    app.require_subcommand(1);
    int status = kOk;

    std::string out_root = "svehdr-out";
    if (const char* env = std::getenv(kOutputRootEnv); env && *env) out_root = env;
    const auto default_out = [&](const char* sub) { return (fs::path(out_root) / sub).string(); };

    // simulate
    SimulateArgs sim;
    sim.out = default_out("simulate");
    auto* simulate = app.add_subcommand("simulate", "Render flat-field and/or test-chart exposures");
    sim.sensor.add(*simulate);
    simulate->add_flag("--flatfield", sim.flatfield, "Render a flat-field exposure sweep");
    simulate->add_flag("--chart", sim.chart, "Render test-chart exposures");
    simulate->add_option("--exposures", sim.exposures, "Frames in the flat-field sweep")->capture_default_str();
    simulate->add_option("--t-min", sim.t_min, "Shortest exposure, s")->capture_default_str();
    simulate->add_option("--t-max", sim.t_max, "Longest exposure, s")->capture_default_str();
    simulate->add_option("--shutter-step", sim.shutter_step, "Shutter quantum, s (0 = continuous)")
        ->capture_default_str();
    simulate->add_option("--chart-exposures", sim.chart_exposures, "Chart exposure times, s")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_option("--width", sim.width, "Flat-field width, sensor pixels")->capture_default_str();
    simulate->add_option("--height", sim.height, "Flat-field height, sensor pixels")->capture_default_str();
    simulate->add_option("--chart-width", sim.chart_width, "Chart width, sensor pixels")->capture_default_str();
    simulate->add_option("--chart-height", sim.chart_height, "Chart height, sensor pixels")->capture_default_str();
    simulate->add_option("--steps", sim.steps, "Gradient steps")->capture_default_str();
    simulate->add_option("--contrast", sim.contrast, "Brightest / darkest gradient step")->capture_default_str();
    simulate->add_option("--level", sim.level, "Scene irradiance scale")->capture_default_str();
    simulate->add_option("--gain", sim.gain, "DN per irradiance-second on the main channel")->capture_default_str();
    simulate->add_option("--read-noise", sim.read_noise, "Gaussian read noise sigma, DN")->capture_default_str();
    simulate->add_flag("--shot-noise", sim.shot_noise, "Add Poisson shot noise");
    simulate->add_flag("--shoulder", sim.shoulder, "Compress the response above eol");
    simulate->add_option("--seed", sim.seed, "Noise seed")->capture_default_str();
    simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();
    simulate->callback([&] { status = run_simulate(*simulate, sim); });

    // calibrate
    CalibrateArgs cal;
    cal.out = default_out("calibrate");
    auto* calibrate_cmd = app.add_subcommand("calibrate", "Fit a correction profile to a flat-field series");
    cal.sensor.add(*calibrate_cmd);
    calibrate_cmd->add_option("--manifest", cal.manifest, "Exposure manifest CSV")
        ->required()
        ->check(CLI::ExistingFile);
    calibrate_cmd->add_option("--roi", cal.roi, "x,y,w,h in quad pixels (default: centred 256x256)");
    calibrate_cmd->add_option("--poly-order", cal.fit.poly_order, "Order N of f(T)")->capture_default_str();
    calibrate_cmd->add_option("--alpha-order", cal.fit.alpha_order, "Order M of alpha(v)")->capture_default_str();
    calibrate_cmd->add_option("--margin", cal.fit.linear_margin, "Linear region: mean < margin * eol")
        ->capture_default_str();
    calibrate_cmd->add_option("--intercept-max", cal.fit.intercept_max, "Upper bound of b, DN")
        ->capture_default_str();
    calibrate_cmd->add_option("--alpha-grid", cal.alpha_grid, "dense | measured")->capture_default_str();
    calibrate_cmd->add_option("--grid-points", cal.fit.dense_grid_points, "Points of the dense alpha grid")
        ->capture_default_str();
    calibrate_cmd->add_option("--min-purity", cal.fit.min_tier_purity, "Minimum single-tier share of the ROI")
        ->capture_default_str();
    calibrate_cmd->add_option("--min-frames", cal.min_entries, "Minimum frames in the series")->capture_default_str();
    calibrate_cmd->add_option("--min-decades", cal.min_decades, "Minimum exposure span, decades")
        ->capture_default_str();
    calibrate_cmd->add_option("--out", cal.out, "Output directory")->capture_default_str();
    calibrate_cmd->callback([&] { status = run_calibrate(*calibrate_cmd, cal); });

    // reconstruct
    ReconstructArgs rec;
    rec.out = default_out("reconstruct");
    auto* reconstruct = app.add_subcommand("reconstruct", "Build a linear HDR image from one raw frame");
    rec.sensor.add(*reconstruct, false, false);
    reconstruct->add_option("--eol", rec.eol, "Sensor eol of the frame (default: the profile's)");
    reconstruct->add_option("--frame", rec.frame, "Raw frame")->required()->check(CLI::ExistingFile);
    reconstruct->add_option("--profile", rec.profile, "Correction profile")->required()->check(CLI::ExistingFile);
    reconstruct->add_option("--domain-policy", rec.domain_policy, "clamp | invalidate")->capture_default_str();
    reconstruct->add_option("--noise-floor", rec.noise_floor, "Noise floor for dynamic range, DN")
        ->capture_default_str();
    reconstruct->add_flag("--preview", rec.preview, "Also write an 8-bit preview");
    reconstruct->add_option("--out", rec.out, "Output directory")->capture_default_str();
    reconstruct->callback([&] { status = run_reconstruct(*reconstruct, rec); });

    // evaluate
    EvaluateArgs ev;
    ev.out = default_out("evaluate");
    auto* evaluate = app.add_subcommand("evaluate", "Compare a reconstruction with a reference and log metrics");
    evaluate->add_option("--reconstructed", ev.reconstructed, "Reconstructed HDR image")
        ->required()
        ->check(CLI::ExistingFile);
    evaluate->add_option("--reference", ev.reference, "Reference HDR image")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--sve", ev.sve, "SVE value image of the reconstruction")
        ->required()
        ->check(CLI::ExistingFile);
    evaluate->add_option("--regions", ev.regions, "Halftone regions CSV")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--eol", ev.eol, "eol of the SVE image")->capture_default_str();
    evaluate->add_option("--scale", ev.scale, "Exposure ratio reconstructed / reference")->capture_default_str();
    evaluate->add_option("--exposure", ev.exposure, "Exposure time recorded in the row, s")->capture_default_str();
    evaluate->add_option("--noise-floor", ev.noise_floor, "Noise floor for dynamic range, DN")->capture_default_str();
    evaluate->add_option("--white-index", ev.white_index, "Index of the reference halftone region")
        ->capture_default_str();
    evaluate->add_option("--csv", ev.csv, "Metrics CSV to append to (default: <out>/metrics.csv)");
    evaluate->add_option("--out", ev.out, "Output directory")->capture_default_str();
    evaluate->callback([&] { status = run_evaluate(ev); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const InvalidArgument& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kUsage;
    } catch (const IoError& e) {
        fmt::print(stderr, "I/O error: {}\n", e.what());
        return kIo;
    } catch (const FormatError& e) {
        fmt::print(stderr, "format error: {}\n", e.what());
        return kIo;
    } catch (const CalibrationError& e) {
        fmt::print(stderr, "calibration error: {}\n", e.what());
        return kCalibration;
    } catch (const ProfileMismatch& e) {
        fmt::print(stderr, "profile mismatch: {}\n", e.what());
        return kMismatch;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return status;
}
