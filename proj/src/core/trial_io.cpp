#include "core/trial_io.hpp"

#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "core/errors.hpp"
#include "core/plant.hpp"

namespace posturebench {

namespace {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

struct Column {
    const char* name;
    std::vector<double> TrialRecord::*member;
};

// Fixed on-disk column order; absent channels simply produce no column.
constexpr Column kColumns[] = {
    {"time_s", &TrialRecord::time_s},
    {"platform_cmd_rad", &TrialRecord::platform_cmd},
    {"fs_rad", &TrialRecord::fs},
    {"ss_rad", &TrialRecord::ss},
    {"ls_rad", &TrialRecord::ls},
    {"ts_rad", &TrialRecord::ts},
    {"com_rad", &TrialRecord::com},
    {"ankle_torque_nm", &TrialRecord::ankle_torque},
    {"hip_torque_nm", &TrialRecord::hip_torque},
};

std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

const char* cmd_unit(const std::string& scenario) {
    if (scenario == "translation") return "m";
    if (scenario == "contact-pull") return "N*m";
    return "rad";
}

double parse_number(const std::string& field, const std::string& origin, std::size_t line_no,
                    const char* column) {
    const char* begin = field.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        throw ParseError(origin + ": bad number '" + field + "' in column " + column + " at line " +
                         std::to_string(line_no));
    }
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

std::string trial_to_text(const TrialRecord& rec) {
    const std::size_t n = rec.size();
    if (n == 0) throw InvalidArgument("refusing to write an empty trial record");
    if (!(rec.rate_hz > 0.0)) throw InvalidArgument("trial record has no sampling rate");
    if (rec.fs.size() != n) throw InvalidArgument("trial record lacks the support tilt channel");
    if (rec.ss.empty() && rec.ls.empty() && rec.ts.empty() && rec.com.empty()) {
        throw InvalidArgument("trial record has no body channel");
    }

    std::vector<const Column*> present;
    for (const Column& c : kColumns) {
        const std::vector<double>& v = rec.*(c.member);
        if (v.empty()) continue;
        if (v.size() != n) {
            throw InvalidArgument(std::string("channel ") + c.name + " length mismatch");
        }
        present.push_back(&c);
    }

    std::string out;
    out.reserve(64 * n);
    out += "# ";
    out += kTrialFormatTag;
    out += '\n';
    out += "# scenario: " + (rec.scenario.empty() ? std::string("tilt") : rec.scenario) + '\n';
    out += std::string("# outcome: ") + to_string(rec.outcome) + '\n';
    out += "# rate_hz: " + fmt9(rec.rate_hz) + '\n';
    out += "# period_s: " + fmt9(rec.period_s) + '\n';
    out += "# settle_periods: " + std::to_string(rec.settle_periods) + '\n';
    if (rec.outcome == TrialOutcome::Fallen) {
        out += "# fall_time_s: " + fmt9(rec.fall_time_s) + '\n';
    }
    out += std::string("# units: time=s, angles=rad, torques=N*m, platform_cmd=") +
           cmd_unit(rec.scenario) + '\n';
    if (!rec.model_json.empty()) out += "# model: " + one_line(rec.model_json) + '\n';
    if (!rec.spec_json.empty()) out += "# spec: " + one_line(rec.spec_json) + '\n';

    for (std::size_t i = 0; i < present.size(); ++i) {
        if (i) out += ',';
        out += present[i]->name;
    }
    out += '\n';

    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < present.size(); ++i) {
            if (i) out += ',';
            out += fmt9((rec.*(present[i]->member))[k]);
        }
        out += '\n';
    }
    return out;
}

TrialRecord trial_from_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw ParseError(origin + ": empty trial file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != std::string("# ") + kTrialFormatTag) {
        throw ParseError(origin + ": unrecognized trial file version (expected '# " +
                         std::string(kTrialFormatTag) + "')");
    }

    TrialRecord rec;
    rec.scenario = "tilt";
    std::string header_line;
    bool have_columns = false;
    std::vector<const Column*> cols;

    auto handle_meta = [&](const std::string& key, const std::string& value) {
        if (key == "scenario") {
            rec.scenario = value;
        } else if (key == "outcome") {
            rec.outcome = trial_outcome_from_string(value);
        } else if (key == "rate_hz") {
            rec.rate_hz = parse_number(value, origin, line_no, "rate_hz");
        } else if (key == "period_s") {
            rec.period_s = parse_number(value, origin, line_no, "period_s");
        } else if (key == "settle_periods") {
            rec.settle_periods = static_cast<int>(parse_number(value, origin, line_no, "settle_periods"));
        } else if (key == "fall_time_s") {
            rec.fall_time_s = parse_number(value, origin, line_no, "fall_time_s");
        } else if (key == "model") {
            rec.model_json = value;
        } else if (key == "spec") {
            rec.spec_json = value;
        }
        // unknown keys (units, future metadata) pass through silently
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::size_t colon = line.find(':');
            if (colon == std::string::npos || colon < 2) continue;
            std::string key = line.substr(2, colon - 2);
            std::string value = line.substr(colon + 1);
            if (!value.empty() && value.front() == ' ') value.erase(value.begin());
            handle_meta(key, value);
            continue;
        }
        if (!have_columns) {
            for (const std::string& name : split_csv(line)) {
                const Column* found = nullptr;
                for (const Column& c : kColumns) {
                    if (name == c.name) {
                        found = &c;
                        break;
                    }
                }
                if (!found) {
                    throw ParseError(origin + ": unknown column '" + name + "' at line " +
                                     std::to_string(line_no));
                }
                for (const Column* c : cols) {
                    if (c == found) {
                        throw ParseError(origin + ": duplicate column '" + name + "' at line " +
                                         std::to_string(line_no));
                    }
                }
                cols.push_back(found);
            }
            have_columns = true;
            continue;
        }
        std::vector<std::string> fields = split_csv(line);
        if (fields.size() != cols.size()) {
            throw ParseError(origin + ": row at line " + std::to_string(line_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(cols.size()));
        }
        for (std::size_t i = 0; i < cols.size(); ++i) {
            (rec.*(cols[i]->member))
                .push_back(parse_number(fields[i], origin, line_no, cols[i]->name));
        }
    }

    if (!have_columns || rec.time_s.empty()) {
        throw ParseError(origin + ": trial file has no sample rows");
    }
    bool have_time = false, have_fs = false;
    for (const Column* c : cols) {
        if (c->member == &TrialRecord::time_s) have_time = true;
        if (c->member == &TrialRecord::fs) have_fs = true;
    }
    if (!have_time) throw ParseError(origin + ": missing required column time_s");
    if (!have_fs) throw ParseError(origin + ": missing required column fs_rad");
    if (rec.ss.empty() && rec.ls.empty() && rec.ts.empty() && rec.com.empty()) {
        throw ParseError(origin + ": no body channel column present");
    }
    if (!(rec.rate_hz > 0.0)) throw ParseError(origin + ": missing or invalid rate_hz header");

    // Uniform time base: every stamp must sit on its slot of the declared
    // rate. A missing or duplicated row shifts all later stamps a full slot.
    const double dt = 1.0 / rec.rate_hz;
    const std::size_t data_start_line = line_no - rec.time_s.size() + 1;
    for (std::size_t i = 0; i < rec.time_s.size(); ++i) {
        double expected = rec.time_s[0] + static_cast<double>(i) * dt;
        if (std::abs(rec.time_s[i] - expected) > 0.25 * dt) {
            throw ParseError(origin + ": non-uniform time base at line " +
                             std::to_string(data_start_line + i) + " (sample " +
                             std::to_string(i) + ")");
        }
    }

    // Legacy files may omit the CoM column; rebuild it from the segment
    // channels when the embedded model echo makes that possible.
    if (rec.com.empty() && !rec.model_json.empty()) {
        AnthropometricModel model = model_from_json_text(rec.model_json, origin + " (model echo)");
        const std::size_t nseg = model.segments.size();
        const std::vector<double>* seg0 =
            !rec.ls.empty() ? &rec.ls : (!rec.ss.empty() ? &rec.ss : nullptr);
        const std::vector<double>* seg1 = !rec.ts.empty() ? &rec.ts : nullptr;
        bool can = (nseg == 1 && (seg0 || seg1)) || (nseg == 2 && seg0 && seg1);
        if (can) {
            std::vector<double> angles(nseg);
            rec.com.reserve(rec.time_s.size());
            for (std::size_t k = 0; k < rec.time_s.size(); ++k) {
                if (nseg == 1) {
                    angles[0] = seg0 ? (*seg0)[k] : (*seg1)[k];
                } else {
                    angles[0] = (*seg0)[k];
                    angles[1] = (*seg1)[k];
                }
                rec.com.push_back(com_sway(model, angles));
            }
        }
    }
    return rec;
}

void write_trial(const TrialRecord& rec, const std::string& path) {
    write_text_file(path, trial_to_text(rec));
}

TrialRecord read_trial(const std::string& path) {
    return trial_from_text(read_text_file(path), path);
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open '" + tmp + "' for writing");
        f << content;
        f.flush();
        if (!f) {
            std::remove(tmp.c_str());
            throw IoError("short write to '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        int err = errno;
        std::remove(tmp.c_str());
        throw IoError("cannot replace '" + path + "': " + std::strerror(err));
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) throw IoError("read failure on '" + path + "'");
    return ss.str();
}

}  // namespace posturebench
