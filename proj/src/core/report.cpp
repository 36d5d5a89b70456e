#include "core/report.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <set>

#include "core/errors.hpp"
#include "core/trial_io.hpp"
#include <json.hpp>

namespace posturebench {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v, const char* spec = "%.9g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

const std::vector<double>& stimulus_channel(const TrialRecord& rec) {
    if (rec.scenario == "translation" || rec.scenario == "contact-pull") {
        if (rec.platform_cmd.empty()) {
            throw InvalidArgument("record lacks its stimulus channel (platform command)");
        }
        return rec.platform_cmd;
    }
    if (rec.fs.empty()) throw InvalidArgument("record lacks its stimulus channel (support tilt)");
    return rec.fs;
}

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

double need_number(const json& obj, const char* key, const std::string& origin) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
        throw ParseError(origin + ": key '" + key + "' missing or not a number");
    }
    return it->get<double>();
}

std::vector<double> need_number_array(const json& obj, const char* key,
                                      const std::string& origin) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_array()) {
        throw ParseError(origin + ": key '" + key + "' missing or not an array");
    }
    std::vector<double> out;
    out.reserve(it->size());
    for (const auto& v : *it) {
        if (!v.is_number()) throw ParseError(origin + ": key '" + key + "' holds a non-number");
        out.push_back(v.get<double>());
    }
    return out;
}

FrfResult frf_from_json(const json& obj, const std::string& origin) {
    FrfResult f;
    f.frequencies_hz = need_number_array(obj, "frequencies_hz", origin);
    f.gain = need_number_array(obj, "gain", origin);
    f.phase_rad = need_number_array(obj, "phase_rad", origin);
    f.coherence = need_number_array(obj, "coherence", origin);
    std::size_t n = f.frequencies_hz.size();
    if (n == 0 || f.gain.size() != n || f.phase_rad.size() != n || f.coherence.size() != n) {
        throw ParseError(origin + ": response arrays are empty or of unequal length");
    }
    for (double c : f.coherence) {
        if (!(c >= -1e-9 && c <= 1.0 + 1e-9)) {
            throw ParseError(origin + ": coherence outside [0, 1]");
        }
    }
    for (double& c : f.coherence) c = std::clamp(c, 0.0, 1.0);
    return f;
}

ordered_json frf_to_json(const FrfResult& f) {
    ordered_json j;
    j["frequencies_hz"] = f.frequencies_hz;
    j["gain"] = f.gain;
    j["phase_rad"] = f.phase_rad;
    j["coherence"] = f.coherence;
    return j;
}

std::string provenance_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ScoreReport score_trial(const TrialRecord& rec, int settle_periods) {
    if (rec.size() == 0) throw InvalidArgument("cannot score an empty record");
    if (!(rec.period_s > 0.0)) {
        throw InvalidArgument("record carries no stimulus period; scores need a periodic trial");
    }
    if (rec.com.empty()) {
        throw InvalidArgument("record lacks a CoM channel (supply segment columns and a model)");
    }
    const int settle = settle_periods >= 0 ? settle_periods : rec.settle_periods;

    SignalSeries u = trim_steady_state(rec.as_series(stimulus_channel(rec)), settle);
    SignalSeries a = trim_steady_state(rec.as_series(rec.com), settle);

    ScoreReport r;
    r.gain = gain(u, a);
    r.phase_rad = phase(u, a);
    r.power = power(a);
    r.settle_periods = settle;
    r.period_s = rec.period_s;
    r.samples_scored = a.size();

    if (!rec.ankle_torque.empty() && !rec.model_json.empty()) {
        AnthropometricModel model =
            model_from_json_text(rec.model_json, "record model echo");
        SignalSeries tn = normalize_torque(rec.as_series(rec.ankle_torque), model);
        r.torque_rms = std::sqrt(power(trim_steady_state(tn, settle)));
        r.torque_present = true;
    }

    std::string meta = rec.scenario;
    meta += '|';
    meta += to_string(rec.outcome);
    meta += '|';
    meta += fmt(rec.rate_hz, "%.17g");
    meta += '|';
    meta += fmt(rec.period_s, "%.17g");
    meta += '|';
    meta += std::to_string(settle);
    meta += '|';
    meta += rec.model_json;
    meta += '|';
    meta += rec.spec_json;
    r.provenance = fnv1a64(meta);
    return r;
}

std::vector<double> stimulus_harmonics(const SignalSeries& trimmed_u, int max_count) {
    if (max_count < 1) throw InvalidArgument("harmonic count must be positive");
    const std::size_t np = trimmed_u.period_samples();
    const std::size_t n = trimmed_u.size();
    if (n == 0 || n % np != 0) {
        throw InvalidArgument("harmonic scan needs whole stimulus periods");
    }
    const std::size_t nper = n / np;

    // Scan a bounded window of low harmonics; energy is the full-record DFT
    // magnitude at the harmonic's bin.
    std::size_t scan = static_cast<std::size_t>(max_count) * 4;
    std::size_t hmax = (np - 1) / 2;
    scan = std::min(scan, hmax);
    std::vector<double> energy(scan + 1, 0.0);
    double best = 0.0;
    for (std::size_t h = 1; h <= scan; ++h) {
        std::complex<double> acc(0.0, 0.0);
        const double w = -2.0 * kPi * static_cast<double>(h * nper) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            acc += trimmed_u.samples[j] * std::complex<double>(std::cos(w * static_cast<double>(j)),
                                                              std::sin(w * static_cast<double>(j)));
        }
        energy[h] = std::norm(acc);
        best = std::max(best, energy[h]);
    }
    std::vector<double> out;
    if (best <= 0.0) return out;
    for (std::size_t h = 1; h <= scan && out.size() < static_cast<std::size_t>(max_count); ++h) {
        if (energy[h] >= 1e-6 * best) {
            out.push_back(static_cast<double>(h) / trimmed_u.period_s);
        }
    }
    return out;
}

FrfResult frf_for_trial(const TrialRecord& rec, int max_harmonics, int settle_periods) {
    if (!(rec.period_s > 0.0)) {
        throw InvalidArgument("record carries no stimulus period; a response curve needs one");
    }
    if (rec.com.empty()) throw InvalidArgument("record lacks a CoM channel");
    const int settle = settle_periods >= 0 ? settle_periods : rec.settle_periods;
    SignalSeries u = trim_steady_state(rec.as_series(stimulus_channel(rec)), settle);
    SignalSeries a = trim_steady_state(rec.as_series(rec.com), settle);
    std::vector<double> freqs = stimulus_harmonics(u, max_harmonics);
    if (freqs.empty()) throw InvalidArgument("stimulus has no harmonic content");
    return estimate_frf(u, a, freqs);
}

std::string report_to_json_text(const ScoreReport& score, const FrfResult* frf) {
    ordered_json j;
    j["format"] = kReportFormatTag;
    j["gain"] = score.gain;
    j["phase_rad"] = score.phase_rad;
    j["power"] = score.power;
    j["power_unit"] = score.power_unit;
    j["power_display_unit"] = score.power_display_unit;
    if (score.torque_present) j["torque_rms"] = score.torque_rms;
    j["settle_periods"] = score.settle_periods;
    j["period_s"] = score.period_s;
    j["samples_scored"] = score.samples_scored;
    j["provenance"] = provenance_hex(score.provenance);
    if (frf) j["frf"] = frf_to_json(*frf);
    return j.dump(2) + "\n";
}

LoadedReport report_from_json_text(const std::string& text, const std::string& origin) {
    json root = parse_json(text, origin);
    if (!root.is_object() || root.value("format", "") != kReportFormatTag) {
        throw ParseError(origin + ": not a '" + std::string(kReportFormatTag) + "' document");
    }
    LoadedReport out;
    out.score.gain = need_number(root, "gain", origin);
    out.score.phase_rad = need_number(root, "phase_rad", origin);
    out.score.power = need_number(root, "power", origin);
    if (root.contains("torque_rms")) {
        out.score.torque_rms = need_number(root, "torque_rms", origin);
        out.score.torque_present = true;
    }
    if (root.contains("settle_periods")) {
        out.score.settle_periods = static_cast<int>(need_number(root, "settle_periods", origin));
    }
    if (root.contains("period_s")) out.score.period_s = need_number(root, "period_s", origin);
    if (root.contains("samples_scored")) {
        out.score.samples_scored =
            static_cast<std::uint64_t>(need_number(root, "samples_scored", origin));
    }
    if (root.contains("provenance")) {
        auto& p = root.at("provenance");
        if (!p.is_string()) throw ParseError(origin + ": provenance must be a string");
        out.score.provenance =
            std::strtoull(p.get<std::string>().c_str(), nullptr, 16);
    }
    if (root.contains("frf")) {
        out.frf = frf_from_json(root.at("frf"), origin);
        out.has_frf = true;
    }
    return out;
}

LoadedReport load_report(const std::string& path) {
    return report_from_json_text(read_text_file(path), path);
}

void write_report(const ScoreReport& score, const FrfResult* frf, const std::string& path) {
    write_text_file(path, report_to_json_text(score, frf));
}

std::string compare_reports_json(const LoadedReport& a, const LoadedReport& b,
                                 const CompareWeights& weights) {
    auto brief = [](const LoadedReport& r) {
        ordered_json j;
        j["gain"] = r.score.gain;
        j["phase_rad"] = r.score.phase_rad;
        j["power"] = r.score.power;
        if (r.score.torque_present) j["torque_rms"] = r.score.torque_rms;
        return j;
    };
    ordered_json j;
    j["format"] = "posturebench-compare v1";
    j["a"] = brief(a);
    j["b"] = brief(b);
    ordered_json d;
    d["gain"] = b.score.gain - a.score.gain;
    d["phase_rad"] = wrap_angle(b.score.phase_rad - a.score.phase_rad);
    d["power"] = b.score.power - a.score.power;
    if (a.score.torque_present && b.score.torque_present) {
        d["torque_rms"] = b.score.torque_rms - a.score.torque_rms;
    }
    j["delta"] = d;
    if (a.has_frf && b.has_frf) {
        ordered_json l;
        l["distance"] = compare_to_reference(a.frf, b.frf, weights);
        l["log_gain_weight"] = weights.log_gain;
        l["phase_weight"] = weights.phase;
        j["likeness"] = l;
    }
    return j.dump(2) + "\n";
}

const ReferenceEntry* ReferenceSet::find(const std::string& name) const {
    for (const ReferenceEntry& e : entries) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

ReferenceSet reference_set_from_json_text(const std::string& text, const std::string& origin) {
    json root = parse_json(text, origin);
    if (!root.is_object() || root.value("format", "") != kReferenceFormatTag) {
        throw ParseError(origin + ": not a '" + std::string(kReferenceFormatTag) + "' document");
    }
    auto it = root.find("entries");
    if (it == root.end() || !it->is_array()) {
        throw ParseError(origin + ": key 'entries' missing or not an array");
    }
    ReferenceSet set;
    std::set<std::string> names;
    for (const auto& e : *it) {
        if (!e.is_object()) throw ParseError(origin + ": entry is not an object");
        ReferenceEntry entry;
        entry.name = e.value("name", "");
        if (entry.name.empty()) throw ParseError(origin + ": entry without a name");
        if (!names.insert(entry.name).second) {
            throw ParseError(origin + ": duplicate entry name '" + entry.name + "'");
        }
        entry.subject = e.value("subject", "");
        entry.condition = e.value("condition", "");
        entry.notes = e.value("notes", "");
        if (!e.contains("frf")) {
            throw ParseError(origin + ": entry '" + entry.name + "' lacks a response curve");
        }
        entry.frf = frf_from_json(e.at("frf"), origin + " entry '" + entry.name + "'");
        set.entries.push_back(std::move(entry));
    }
    if (set.entries.empty()) throw ParseError(origin + ": reference set has no entries");
    return set;
}

ReferenceSet load_reference_set(const std::string& path) {
    return reference_set_from_json_text(read_text_file(path), path);
}

std::string compare_to_reference_json(const LoadedReport& report, const ReferenceSet& set,
                                      const std::string& entry_name,
                                      const CompareWeights& weights) {
    if (!report.has_frf) {
        throw InvalidArgument("report carries no response curve; rerun the analysis with one");
    }
    const ReferenceEntry* entry = nullptr;
    if (entry_name.empty()) {
        if (set.entries.size() != 1) {
            throw InvalidArgument("reference set has several entries; name one");
        }
        entry = &set.entries.front();
    } else {
        entry = set.find(entry_name);
        if (!entry) throw InvalidArgument("no reference entry named '" + entry_name + "'");
    }

    double distance = compare_to_reference(report.frf, entry->frf, weights);
    ordered_json j;
    j["format"] = "posturebench-refcompare v1";
    j["entry"] = entry->name;
    j["distance"] = distance;
    j["frequencies_hz"] = report.frf.frequencies_hz;
    std::vector<double> dlog, dphi;
    for (std::size_t i = 0; i < report.frf.frequencies_hz.size(); ++i) {
        dlog.push_back(std::log(report.frf.gain[i]) - std::log(entry->frf.gain[i]));
        dphi.push_back(wrap_angle(report.frf.phase_rad[i] - entry->frf.phase_rad[i]));
    }
    j["delta_log_gain"] = dlog;
    j["delta_phase_rad"] = dphi;
    return j.dump(2) + "\n";
}

namespace {

struct SvgChannel {
    const char* label;
    const std::vector<double>* data;
    const char* color;
    double width;
};

std::string render_sway_svg(const TrialRecord& rec) {
    std::vector<SvgChannel> chans;
    if (!rec.fs.empty()) chans.push_back({"FS", &rec.fs, "#888888", 1.0});
    if (!rec.ss.empty()) chans.push_back({"SS", &rec.ss, "#1f77b4", 1.0});
    if (!rec.ls.empty()) chans.push_back({"LS", &rec.ls, "#2ca02c", 1.0});
    if (!rec.ts.empty()) chans.push_back({"TS", &rec.ts, "#d62728", 1.0});
    if (!rec.com.empty()) chans.push_back({"CoM", &rec.com, "#000000", 1.8});
    if (chans.empty()) throw InvalidArgument("record has no plottable channel");

    double ymin = 1e300, ymax = -1e300;
    for (const SvgChannel& c : chans) {
        for (double v : *c.data) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (!(ymax > ymin)) {
        ymin -= 1e-6;
        ymax += 1e-6;
    }
    double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double W = 900, H = 420, L = 70, R = 160, T = 40, B = 50;
    const double pw = W - L - R, ph = H - T - B;
    const double t0 = rec.time_s.front();
    const double t1 = std::max(rec.time_s.back(), t0 + 1e-12);

    auto X = [&](double t) { return L + (t - t0) / (t1 - t0) * pw; };
    auto Y = [&](double v) { return T + (1.0 - (v - ymin) / (ymax - ymin)) * ph; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"420\" "
         "viewBox=\"0 0 900 420\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"900\" height=\"420\" fill=\"#ffffff\"/>\n";
    s += "<text x=\"70\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" + rec.scenario +
         " trial, " + to_string(rec.outcome) + "</text>\n";
    s += "<rect x=\"" + fmt(L, "%.2f") + "\" y=\"" + fmt(T, "%.2f") + "\" width=\"" +
         fmt(pw, "%.2f") + "\" height=\"" + fmt(ph, "%.2f") +
         "\" fill=\"none\" stroke=\"#333333\"/>\n";

    // zero line when visible
    if (ymin < 0.0 && ymax > 0.0) {
        s += "<line x1=\"" + fmt(L, "%.2f") + "\" y1=\"" + fmt(Y(0.0), "%.2f") + "\" x2=\"" +
             fmt(L + pw, "%.2f") + "\" y2=\"" + fmt(Y(0.0), "%.2f") +
             "\" stroke=\"#cccccc\" stroke-dasharray=\"4 3\"/>\n";
    }

    const std::size_t n = rec.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 2000);
    for (const SvgChannel& c : chans) {
        s += "<polyline fill=\"none\" stroke=\"";
        s += c.color;
        s += "\" stroke-width=\"" + fmt(c.width, "%.1f") + "\" points=\"";
        for (std::size_t k = 0; k < n; k += stride) {
            s += fmt(X(rec.time_s[k]), "%.2f");
            s += ',';
            s += fmt(Y((*c.data)[k]), "%.2f");
            s += ' ';
        }
        if ((n - 1) % stride != 0) {
            s += fmt(X(rec.time_s[n - 1]), "%.2f");
            s += ',';
            s += fmt(Y((*c.data)[n - 1]), "%.2f");
        }
        s += "\"/>\n";
    }

    // axis labels
    s += "<text x=\"8\" y=\"" + fmt(Y(ymax) + 5, "%.2f") +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + fmt(ymax, "%.4g") + "</text>\n";
    s += "<text x=\"8\" y=\"" + fmt(Y(ymin) + 5, "%.2f") +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + fmt(ymin, "%.4g") + "</text>\n";
    s += "<text x=\"" + fmt(L, "%.2f") + "\" y=\"" + fmt(H - 20, "%.2f") +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + fmt(t0, "%.4g") + " s</text>\n";
    s += "<text x=\"" + fmt(L + pw - 40, "%.2f") + "\" y=\"" + fmt(H - 20, "%.2f") +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + fmt(t1, "%.4g") + " s</text>\n";
    s += "<text x=\"16\" y=\"" + fmt(T + ph / 2, "%.2f") +
         "\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
         fmt(T + ph / 2, "%.2f") + ")\">sway [rad]</text>\n";

    // legend
    double ly = T + 10;
    for (const SvgChannel& c : chans) {
        s += "<line x1=\"" + fmt(W - R + 20, "%.2f") + "\" y1=\"" + fmt(ly - 4, "%.2f") +
             "\" x2=\"" + fmt(W - R + 50, "%.2f") + "\" y2=\"" + fmt(ly - 4, "%.2f") +
             "\" stroke=\"";
        s += c.color;
        s += "\" stroke-width=\"" + fmt(c.width, "%.1f") + "\"/>\n";
        s += "<text x=\"" + fmt(W - R + 58, "%.2f") + "\" y=\"" + fmt(ly, "%.2f") +
             "\" font-family=\"sans-serif\" font-size=\"13\">";
        s += c.label;
        s += "</text>\n";
        ly += 22;
    }
    s += "</svg>\n";
    return s;
}

std::string render_plot_csv(const TrialRecord& rec) {
    struct Col {
        const char* name;
        const std::vector<double>* data;
    };
    std::vector<Col> cols = {{"time_s", &rec.time_s}};
    if (!rec.platform_cmd.empty()) cols.push_back({"platform_cmd_rad", &rec.platform_cmd});
    if (!rec.fs.empty()) cols.push_back({"fs_rad", &rec.fs});
    if (!rec.ss.empty()) cols.push_back({"ss_rad", &rec.ss});
    if (!rec.ls.empty()) cols.push_back({"ls_rad", &rec.ls});
    if (!rec.ts.empty()) cols.push_back({"ts_rad", &rec.ts});
    if (!rec.com.empty()) cols.push_back({"com_rad", &rec.com});
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        out += cols[i].name;
    }
    out += '\n';
    for (std::size_t k = 0; k < rec.size(); ++k) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out += ',';
            out += fmt((*cols[i].data)[k]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace

void write_report_bundle(const TrialRecord& rec, const std::string& out_dir, bool with_frf,
                         int max_harmonics) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create directory '" + out_dir + "': " + ec.message());

    ScoreReport score = score_trial(rec);
    if (with_frf) {
        FrfResult frf = frf_for_trial(rec, max_harmonics);
        write_report(score, &frf, out_dir + "/report.json");
    } else {
        write_report(score, nullptr, out_dir + "/report.json");
    }
    write_text_file(out_dir + "/sway.csv", render_plot_csv(rec));
    write_text_file(out_dir + "/sway.svg", render_sway_svg(rec));
}

}  // namespace posturebench
