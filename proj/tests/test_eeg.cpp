#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "bta/dataset_io.hpp"
#include "bta/eeg.hpp"
#include "bta/folds.hpp"
#include "bta/montage.hpp"
#include "bta/rng.hpp"
#include "bta/synth.hpp"

using namespace bta;

namespace {

Recording make_recording(int channels, double rate, double seconds, uint64_t seed,
                         const std::string& group = "g0") {
    Recording rec;
    Montage montage = Montage::standard_10_20();
    const auto& all = montage.channels();
    for (int e = 0; e < channels; ++e) rec.channel_names.push_back(all[e].first);
    rec.sample_rate = rate;
    const int T = static_cast<int>(rate * seconds);
    rec.signal = Matrix(channels, T);
    Rng rng(seed);
    for (size_t i = 0; i < rec.signal.size(); ++i) rec.signal[i] = rng.normal();
    rec.group_id = group;
    rec.label = 1;
    return rec;
}

}  // namespace

TEST_CASE("spherical_from_cartesian: origin maps to all zeros") {
    auto s = spherical_from_cartesian({0.2, -0.1, 0.5}, {0.2, -0.1, 0.5});
    CHECK(s.rho == 0.0);
    CHECK(s.theta == 0.0);
    CHECK(s.phi == 0.0);
}

TEST_CASE("spherical_from_cartesian: unit step along zenith") {
    auto s = spherical_from_cartesian({0.0, 0.0, 1.5}, {0.0, 0.0, 0.5});
    CHECK(s.rho == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.theta == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.phi == 0.0);
}

TEST_CASE("spherical_from_cartesian: random points round-trip to 1e-12") {
    Rng rng(41);
    for (int i = 0; i < 50; ++i) {
        Point3 origin{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Point3 p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        auto s = spherical_from_cartesian(p, origin);
        CHECK(s.theta >= 0.0);
        CHECK(s.theta <= M_PI);
        CHECK(s.phi > -M_PI);
        CHECK(s.phi <= M_PI);
        // independent reconstruction from the spherical triple
        const double x = origin.x + s.rho * std::sin(s.theta) * std::cos(s.phi);
        const double y = origin.y + s.rho * std::sin(s.theta) * std::sin(s.phi);
        const double z = origin.z + s.rho * std::cos(s.theta);
        CHECK(std::fabs(x - p.x) < 1e-12);
        CHECK(std::fabs(y - p.y) < 1e-12);
        CHECK(std::fabs(z - p.z) < 1e-12);
    }
}

TEST_CASE("montage: standard table has the channels the generator needs") {
    Montage m = Montage::standard_10_20();
    for (const char* name : {"F3", "F4", "Cz", "A1", "A2", "T7", "PO3"})
        CHECK(m.has_channel(name));
    CHECK(m.centralities().size() == 3);
    CHECK(m.centralities()[0].z == doctest::Approx(1.0));  // vertex
    // left mastoid has positive y, right negative, both below the equator
    CHECK(m.centralities()[1].y > 0.0);
    CHECK(m.centralities()[2].y < 0.0);
    CHECK(m.centralities()[1].z < 0.0);
    for (const auto& [name, p] : m.channels())
        CHECK(std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z) <= Montage::kMaxNorm);
}

TEST_CASE("montage: unknown channels are rejected, not guessed") {
    Montage m = Montage::standard_10_20();
    CHECK_THROWS_AS(m.position("XYZ99"), data_error);
}

TEST_CASE("montage: text round trip") {
    Montage m = Montage::standard_10_20();
    Montage parsed = Montage::parse(m.to_text());
    CHECK(parsed.channels().size() == m.channels().size());
    const Point3& a = m.position("F3");
    const Point3& b = parsed.position("F3");
    CHECK(a.x == doctest::Approx(b.x).epsilon(1e-15));
    CHECK(a.y == doctest::Approx(b.y).epsilon(1e-15));
}

TEST_CASE("window: 16 s at 128 Hz with 1 s non-overlapping windows") {
    Recording rec = make_recording(4, 128.0, 16.0, 1);
    auto samples = window(rec, 1.0, 0.0);
    CHECK(samples.size() == 16);
    for (const auto& s : samples) {
        CHECK(s.temporal.rows() == 4);
        CHECK(s.temporal.cols() == 128);
        CHECK(s.label == 1);
        CHECK(s.group_id == "g0");
    }
}

TEST_CASE("window: window length equal to recording gives one sample") {
    Recording rec = make_recording(2, 100.0, 3.0, 2);
    auto samples = window(rec, 3.0, 0.0);
    CHECK(samples.size() == 1);
}

TEST_CASE("window: overlapping windows follow the index enumeration") {
    // 10 s at 100 Hz, 2 s window, 1 s overlap -> starts at 0..8 s
    Recording rec = make_recording(2, 100.0, 10.0, 3);
    auto samples = window(rec, 2.0, 1.0);
    REQUIRE(samples.size() == 9);
    for (size_t w = 0; w < samples.size(); ++w) {
        const int start = static_cast<int>(w) * 100;
        for (int i = 0; i < 200; i += 37)
            CHECK(samples[w].temporal(0, i) == rec.signal(0, start + i));
    }
}

TEST_CASE("window: too-short recording yields empty list with warning") {
    Recording rec = make_recording(2, 100.0, 1.0, 4);
    bool too_short = false;
    auto samples = window(rec, 2.0, 0.0, &too_short);
    CHECK(samples.empty());
    CHECK(too_short);
}

TEST_CASE("window then concatenate reproduces the original prefix") {
    Recording rec = make_recording(3, 64.0, 5.5, 5);
    auto samples = window(rec, 1.0, 0.0);
    REQUIRE(samples.size() == 5);
    for (int e = 0; e < 3; ++e) {
        int t = 0;
        for (const auto& s : samples)
            for (int i = 0; i < s.temporal.cols(); ++i, ++t)
                CHECK(s.temporal(e, i) == rec.signal(e, t));
    }
}

TEST_CASE("de_features: zero signal sits at the variance floor") {
    Matrix zero(2, 128);
    Matrix de = de_features(zero, 128.0, search_style_bands());
    const double floor_de = 0.5 * std::log(2.0 * M_PI * M_E * 1e-10);
    for (size_t i = 0; i < de.size(); ++i)
        CHECK(de[i] == doctest::Approx(floor_de).epsilon(1e-12));
}

TEST_CASE("de_features: 10 Hz unit sinusoid concentrates in the alpha band") {
    const int n = 128;
    const double rate = 128.0;
    Matrix sig(1, n);
    for (int i = 0; i < n; ++i) sig(0, i) = std::sin(2.0 * M_PI * 10.0 * i / rate);

    // time-domain oracle: the 10 Hz bin is the whole signal, so the
    // band-passed signal equals the signal; its variance is what DE sees
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += sig(0, i);
    mean /= n;
    double variance = 0.0;
    for (int i = 0; i < n; ++i) variance += (sig(0, i) - mean) * (sig(0, i) - mean);
    variance /= n;
    CHECK(variance == doctest::Approx(0.5).epsilon(1e-9));

    Matrix de = de_features(sig, rate, search_style_bands());
    // alpha band (8-13) holds the tone
    CHECK(de(0, 2) == doctest::Approx(0.5 * std::log(2.0 * M_PI * M_E * variance))
                          .epsilon(1e-9));
    CHECK(de(0, 2) == doctest::Approx(0.5 * std::log(M_PI * M_E)).epsilon(1e-4));
    // every other band stays at the floor
    const double floor_de = 0.5 * std::log(2.0 * M_PI * M_E * 1e-10);
    for (int b : {0, 1, 3, 4}) CHECK(de(0, b) == doctest::Approx(floor_de).epsilon(1e-6));
}

TEST_CASE("de_features: band tables carry the expected widths") {
    CHECK(search_style_bands().size() == 5);
    CHECK(amigos_style_bands().size() == 4);
    CHECK(search_style_bands()[0].name == "delta");
    CHECK(amigos_style_bands()[0].name == "theta");
}

TEST_CASE("de_features: band above Nyquist is a configuration error") {
    Matrix sig(1, 64);
    CHECK_THROWS_AS(de_features(sig, 64.0, search_style_bands()), config_error);
}

TEST_CASE("de_features: doubling amplitude adds exactly ln 2 above the floor") {
    Rng rng(42);
    const int n = 128;
    Matrix sig(2, n);
    for (size_t i = 0; i < sig.size(); ++i) sig[i] = rng.normal();
    Matrix doubled = scale(sig, 2.0);
    Matrix a = de_features(sig, 128.0, search_style_bands());
    Matrix b = de_features(doubled, 128.0, search_style_bands());
    for (size_t i = 0; i < a.size(); ++i)
        CHECK(b[i] - a[i] == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("de_features: channel reordering permutes rows identically") {
    Rng rng(43);
    Matrix sig(3, 64);
    for (size_t i = 0; i < sig.size(); ++i) sig[i] = rng.normal();
    Matrix swapped(3, 64);
    const int perm[3] = {2, 0, 1};
    for (int e = 0; e < 3; ++e)
        for (int i = 0; i < 64; ++i) swapped(e, i) = sig(perm[e], i);
    Matrix a = de_features(sig, 128.0, amigos_style_bands());
    Matrix b = de_features(swapped, 128.0, amigos_style_bands());
    for (int e = 0; e < 3; ++e)
        for (int j = 0; j < 4; ++j) CHECK(b(e, j) == doctest::Approx(a(perm[e], j)));
}

TEST_CASE("make_folds_grouped: ten groups over ten folds, one each") {
    std::vector<EegSample> samples;
    for (int g = 0; g < 10; ++g)
        for (int i = 0; i < 3; ++i) {
            EegSample s;
            s.group_id = "g" + std::to_string(g);
            samples.push_back(s);
        }
    FoldPlan plan = make_folds_grouped(samples, 10, 7);
    std::set<int> folds_used;
    for (int f : plan.assignment) folds_used.insert(f);
    CHECK(folds_used.size() == 10);
    // every group maps to exactly one fold
    for (int g = 0; g < 10; ++g) {
        std::set<int> folds_of_group;
        for (size_t i = 0; i < samples.size(); ++i)
            if (samples[i].group_id == "g" + std::to_string(g))
                folds_of_group.insert(plan.assignment[i]);
        CHECK(folds_of_group.size() == 1);
    }
}

TEST_CASE("make_folds_grouped: 23 groups over 10 folds gives sizes {3x3, 2x7}") {
    std::vector<EegSample> samples;
    for (int g = 0; g < 23; ++g) {
        EegSample s;
        s.group_id = "g" + std::to_string(g);
        samples.push_back(s);
    }
    FoldPlan plan = make_folds_grouped(samples, 10, 11);
    std::vector<int> group_count(10, 0);
    for (int f : plan.assignment) group_count[f] += 1;  // one sample per group here
    std::sort(group_count.begin(), group_count.end());
    const std::vector<int> expect = {2, 2, 2, 2, 2, 2, 2, 3, 3, 3};
    CHECK(group_count == expect);
}

TEST_CASE("make_folds_grouped: fewer groups than folds is an error") {
    std::vector<EegSample> samples(4);
    for (int i = 0; i < 4; ++i) samples[i].group_id = "g" + std::to_string(i % 2);
    CHECK_THROWS_AS(make_folds_grouped(samples, 10, 1), data_error);
}

TEST_CASE("make_folds_random: 100 samples over 10 folds of size 10") {
    FoldPlan plan = make_folds_random(100, 10, 5);
    std::vector<int> sizes(10, 0);
    for (int f : plan.assignment) sizes[f] += 1;
    for (int s : sizes) CHECK(s == 10);
}

TEST_CASE("make_folds_random: folds partition the index set") {
    FoldPlan plan = make_folds_random(37, 10, 5);
    CHECK(plan.assignment.size() == 37);
    std::vector<int> sizes(10, 0);
    for (int f : plan.assignment) {
        CHECK(f >= 0);
        CHECK(f < 10);
        sizes[f] += 1;
    }
    const auto [mn, mx] = std::minmax_element(sizes.begin(), sizes.end());
    CHECK(*mx - *mn <= 1);
}

TEST_CASE("make_folds_random: fixed seed replays identically") {
    FoldPlan a = make_folds_random(64, 10, 99);
    FoldPlan b = make_folds_random(64, 10, 99);
    CHECK(a.assignment == b.assignment);
    FoldPlan c = make_folds_random(64, 10, 100);
    CHECK(a.assignment != c.assignment);
}

TEST_CASE("synth_generate: deterministic under seed") {
    SynthConfig cfg;
    cfg.samples_per_class = 5;
    cfg.seed = 123;
    Dataset a = synth_generate(cfg);
    Dataset b = synth_generate(cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    for (size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].temporal == b.samples[i].temporal);
        CHECK(a.samples[i].spectral == b.samples[i].spectral);
        CHECK(a.samples[i].label == b.samples[i].label);
        CHECK(a.samples[i].group_id == b.samples[i].group_id);
    }
}

TEST_CASE("synth_generate: labels balanced, F3/F4 present, groups well formed") {
    SynthConfig cfg;
    cfg.samples_per_class = 30;
    cfg.seed = 9;
    Dataset ds = synth_generate(cfg);
    CHECK(ds.samples.size() == 60);
    int pos = 0;
    std::set<std::string> groups;
    for (const auto& s : ds.samples) {
        pos += s.label;
        groups.insert(s.group_id);
    }
    CHECK(pos == 30);
    CHECK(groups.size() == 20);
    CHECK(ds.channel_names[0] == "F3");
    CHECK(ds.channel_names[1] == "F4");
}

TEST_CASE("synth_generate: planted alpha asymmetry separates class means at F3") {
    SynthConfig cfg;
    cfg.samples_per_class = 40;
    cfg.effect_size = 2.0;
    cfg.seed = 17;
    Dataset ds = synth_generate(cfg);
    // measured margin of alpha-band DE at F3 between classes
    double mean_sat = 0.0, mean_unsat = 0.0;
    int n_sat = 0, n_unsat = 0;
    const int alpha_idx = 2;  // delta, theta, alpha, ...
    for (const auto& s : ds.samples) {
        if (s.label == 1) {
            mean_sat += s.spectral(0, alpha_idx);
            ++n_sat;
        } else {
            mean_unsat += s.spectral(0, alpha_idx);
            ++n_unsat;
        }
    }
    mean_sat /= n_sat;
    mean_unsat /= n_unsat;
    CHECK(mean_sat - mean_unsat > 0.5);
}

TEST_CASE("synth_generate: E < 4 is a configuration error") {
    SynthConfig cfg;
    cfg.channels = 3;
    CHECK_THROWS_AS(synth_generate(cfg), config_error);
}

TEST_CASE("dataset round trip through the directory format") {
    SynthConfig cfg;
    cfg.samples_per_class = 4;
    cfg.seed = 55;
    Dataset ds = synth_generate(cfg);
    const auto dir = std::filesystem::temp_directory_path() / "bta_test_dataset";
    std::filesystem::remove_all(dir);
    save_dataset(ds, dir);
    Dataset back = load_dataset(dir);
    CHECK(back.channel_names == ds.channel_names);
    CHECK(back.sample_rate == ds.sample_rate);
    CHECK(back.bands.size() == ds.bands.size());
    REQUIRE(back.samples.size() == ds.samples.size());
    for (size_t i = 0; i < ds.samples.size(); ++i) {
        CHECK(back.samples[i].temporal == ds.samples[i].temporal);
        CHECK(back.samples[i].spectral == ds.samples[i].spectral);
        CHECK(back.samples[i].label == ds.samples[i].label);
        CHECK(back.samples[i].group_id == ds.samples[i].group_id);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("recording file round trip") {
    Recording rec = make_recording(3, 64.0, 2.0, 77, "task-9");
    const auto path = std::filesystem::temp_directory_path() / "bta_test.rec";
    save_recording(rec, path);
    Recording back = load_recording(path);
    CHECK(back.channel_names == rec.channel_names);
    CHECK(back.sample_rate == rec.sample_rate);
    CHECK(back.group_id == rec.group_id);
    CHECK(back.label == rec.label);
    CHECK(back.signal == rec.signal);
    std::filesystem::remove(path);
}

TEST_CASE("recording loader rejects duplicate channel names") {
    const auto path = std::filesystem::temp_directory_path() / "bta_dup.rec";
    std::ofstream f(path);
    f << "channels F3 F3\nrate 64\ngroup g\nsignal\n1 2 3\n4 5 6\n";
    f.close();
    CHECK_THROWS_AS(load_recording(path), data_error);
    std::filesystem::remove(path);
}

TEST_CASE("window: bad window or overlap is a configuration error") {
    Recording rec = make_recording(2, 100.0, 3.0, 6);
    CHECK_THROWS_AS(window(rec, 0.0, 0.0), config_error);
    CHECK_THROWS_AS(window(rec, 1.0, 1.0), config_error);
    CHECK_THROWS_AS(window(rec, 1.0, -0.5), config_error);
}
