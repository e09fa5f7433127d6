// Copyright 2026 The photonchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/records_io.h"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace photonchain::cli {

namespace {

constexpr const char *kRecordsTag = "# photonchain records v1";
constexpr const char *kCountsTag = "# photonchain rate-counts v1";

std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) {
        out.push_back(cur);
    }
    return out;
}

[[noreturn]] void malformed(const std::string &name, size_t line, const std::string &what) {
    throw ConfigError(name + ":" + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(const std::string &text, const std::string &name, size_t line, const char *field) {
    T v{};
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        malformed(name, line, std::string("bad ") + field + " '" + text + "'");
    }
    return v;
}

std::string meta_line(const RecordsHeader &h, const std::string &count_key) {
    std::ostringstream os;
    os << "# config_hash=" << h.config_hash << " seed=" << h.seed << " kind=" << to_string(h.kind) << " n=" << h.n
       << ' ' << count_key << '=' << h.shots << " run_period=" << format_double(h.run_period);
    return os.str();
}

std::map<std::string, std::string> parse_meta(const std::string &line, const std::string &name) {
    if (line.rfind("# ", 0) != 0) {
        malformed(name, 2, "missing metadata line");
    }
    std::map<std::string, std::string> kv;
    for (const auto &tok : split(line.substr(2), ' ')) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
            malformed(name, 2, "bad metadata entry '" + tok + "'");
        }
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

RecordsHeader header_from_meta(const std::map<std::string, std::string> &kv, const std::string &count_key,
                               const std::string &name) {
    auto get = [&](const std::string &key) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            malformed(name, 2, "metadata lacks '" + key + "'");
        }
        return it->second;
    };
    RecordsHeader h;
    h.config_hash = get("config_hash");
    h.seed = parse_number<uint64_t>(get("seed"), name, 2, "seed");
    try {
        h.kind = parse_protocol_kind(get("kind"));
    } catch (const std::invalid_argument &e) {
        malformed(name, 2, e.what());
    }
    h.n = parse_number<int>(get("n"), name, 2, "n");
    h.shots = parse_number<uint64_t>(get(count_key), name, 2, count_key.c_str());
    h.run_period = parse_number<double>(get("run_period"), name, 2, "run_period");
    if (h.n < 1) {
        malformed(name, 2, "photon number must be positive");
    }
    return h;
}

std::ofstream open_out(const std::filesystem::path &path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return in;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_records(std::ostream &out, const RecordsHeader &header, std::span<const ShotRecord> records) {
    out << kRecordsTag << '\n' << meta_line(header, "shots") << '\n';
    out << "run_id\tattempts\tvoid\tfield_delta\tt_offset";
    for (int k = 1; k <= header.n; ++k) {
        out << "\tdet" << k << "\tbasis" << k << "\tout" << k;
    }
    out << '\n';
    for (const auto &r : records) {
        if (static_cast<int>(r.photons.size()) != header.n) {
            throw ConfigError("write_records: record photon count differs from header");
        }
        out << r.run_id << '\t' << r.first_photon_attempts << '\t' << (r.void_shot ? 1 : 0) << '\t'
            << format_double(r.field_delta) << '\t' << format_double(r.wall_clock_offset);
        for (const auto &p : r.photons) {
            out << '\t' << (p.detected ? 1 : 0) << '\t' << p.basis.code() << '\t';
            if (!p.detected) {
                out << '.';
            } else {
                out << (p.outcome > 0 ? "+1" : "-1");
            }
        }
        out << '\n';
    }
}

void write_records(const std::filesystem::path &path, const RecordsHeader &header,
                   std::span<const ShotRecord> records) {
    auto out = open_out(path);
    write_records(out, header, records);
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

RecordsFile read_records(std::istream &in, const std::string &name) {
    std::string line;
    if (!std::getline(in, line) || line != kRecordsTag) {
        malformed(name, 1, "not a photonchain records file");
    }
    std::string meta;
    if (!std::getline(in, meta)) {
        malformed(name, 2, "missing metadata line");
    }
    RecordsFile file;
    file.header = header_from_meta(parse_meta(meta, name), "shots", name);
    const auto n = static_cast<size_t>(file.header.n);
    if (!std::getline(in, line)) {
        malformed(name, 3, "missing column header");
    }
    size_t lineno = 3;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto cols = split(line, '\t');
        if (cols.size() != 5 + 3 * n) {
            malformed(name, lineno,
                      "expected " + std::to_string(5 + 3 * n) + " columns, found " + std::to_string(cols.size()));
        }
        ShotRecord r;
        r.run_id = parse_number<uint64_t>(cols[0], name, lineno, "run_id");
        r.first_photon_attempts = parse_number<int>(cols[1], name, lineno, "attempts");
        r.void_shot = parse_number<int>(cols[2], name, lineno, "void") != 0;
        r.field_delta = parse_number<double>(cols[3], name, lineno, "field_delta");
        r.wall_clock_offset = parse_number<double>(cols[4], name, lineno, "t_offset");
        for (size_t k = 0; k < n; ++k) {
            PhotonRecord p;
            const std::string &det = cols[5 + 3 * k];
            const std::string &basis = cols[6 + 3 * k];
            const std::string &out = cols[7 + 3 * k];
            if (det != "0" && det != "1") {
                malformed(name, lineno, "bad detection flag '" + det + "'");
            }
            p.detected = det == "1";
            try {
                p.basis = MeasBasis::parse(basis);
            } catch (const std::invalid_argument &e) {
                malformed(name, lineno, e.what());
            }
            if (p.detected) {
                if (out == "+1") {
                    p.outcome = 1;
                } else if (out == "-1") {
                    p.outcome = -1;
                } else {
                    malformed(name, lineno, "bad outcome '" + out + "'");
                }
            } else if (out != "." && out != "·") {
                malformed(name, lineno, "undetected photon with outcome '" + out + "'");
            }
            r.photons.push_back(p);
        }
        file.records.push_back(std::move(r));
    }
    if (file.records.size() != file.header.shots) {
        malformed(name, lineno,
                  "header announces " + std::to_string(file.header.shots) + " shots, found " +
                      std::to_string(file.records.size()));
    }
    return file;
}

RecordsFile read_records(const std::filesystem::path &path) {
    auto in = open_in(path);
    return read_records(in, path.string());
}

void write_counts(const std::filesystem::path &path, const RecordsHeader &header, const RateCounts &counts) {
    auto out = open_out(path);
    out << kCountsTag << '\n' << meta_line(header, "runs") << " duration=" << format_double(counts.duration) << '\n';
    out << "n\tcounts\n";
    for (size_t i = 0; i < counts.counts.size(); ++i) {
        out << (i + 1) << '\t' << counts.counts[i] << '\n';
    }
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

CountsFile read_counts(const std::filesystem::path &path) {
    auto in = open_in(path);
    const std::string name = path.string();
    std::string line;
    if (!std::getline(in, line) || line != kCountsTag) {
        malformed(name, 1, "not a photonchain rate-counts file");
    }
    std::string meta;
    if (!std::getline(in, meta)) {
        malformed(name, 2, "missing metadata line");
    }
    const auto kv = parse_meta(meta, name);
    CountsFile file;
    file.header = header_from_meta(kv, "runs", name);
    auto it = kv.find("duration");
    if (it == kv.end()) {
        malformed(name, 2, "metadata lacks 'duration'");
    }
    file.counts.duration = parse_number<double>(it->second, name, 2, "duration");
    file.counts.max_n = file.header.n;
    file.counts.runs = file.header.shots;
    file.counts.period = file.header.run_period;
    std::getline(in, line);
    size_t lineno = 3;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto cols = split(line, '\t');
        if (cols.size() != 2) {
            malformed(name, lineno, "expected 2 columns");
        }
        const int n = parse_number<int>(cols[0], name, lineno, "n");
        if (n != static_cast<int>(file.counts.counts.size()) + 1) {
            malformed(name, lineno, "photon numbers must run 1, 2, ...");
        }
        file.counts.counts.push_back(parse_number<uint64_t>(cols[1], name, lineno, "counts"));
    }
    if (static_cast<int>(file.counts.counts.size()) != file.header.n) {
        malformed(name, lineno, "expected one row per photon number");
    }
    return file;
}

bool is_counts_file(const std::filesystem::path &path) {
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);
    return line == kCountsTag;
}

}  // namespace photonchain::cli
