#include "hemopipe/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "hemopipe/errors.hpp"

namespace hemopipe::io {

namespace {

constexpr const char* kRawVersionLine = "# hemopipe raw v1";
constexpr const char* kHemoVersionLine = "# hemopipe hemo v1";
constexpr const char* kFeaturesVersionLine = "# hemopipe features v1";
constexpr const char* kHemoHeader = "t,ir1,ir2,d_chbo2,d_chb";

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: stable newlines
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}

void finish_out(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("failed writing: " + path);
}

std::string next_line(std::ifstream& in) {
    std::string line;
    if (!std::getline(in, line)) return {};
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

void expect_version(std::ifstream& in, const char* expected,
                    const std::string& path) {
    const std::string line = next_line(in);
    if (line != expected) {
        throw SchemaError("unsupported or missing CSV version tag in " + path +
                          " (expected \"" + expected + "\")");
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_double(const std::string& field, const std::string& path) {
    double value = 0.0;
    const auto* begin = field.data();
    const auto* end = begin + field.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc() || result.ptr != end) {
        throw SchemaError("bad numeric field '" + field + "' in " + path);
    }
    return value;
}

Label parse_label(const std::string& field, const std::string& path) {
    int value = 0;
    const auto* begin = field.data();
    const auto* end = begin + field.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc() || result.ptr != end || value < 0 ||
        value >= kNumClasses) {
        throw SchemaError("bad label field '" + field + "' in " + path);
    }
    return static_cast<Label>(value);
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

void write_raw_csv(const std::string& path,
                   const std::vector<SensorFrame>& frames) {
    auto out = open_out(path);
    out << kRawVersionLine << '\n';
    out << "t,led,x,y,z,ir1,ir2\n";
    for (const auto& f : frames) {
        out << format_double(f.t) << ','
            << (f.led == Led::White ? "white" : "nir") << ','
            << format_double(f.x) << ',' << format_double(f.y) << ','
            << format_double(f.z) << ',' << format_double(f.ir1) << ','
            << format_double(f.ir2) << '\n';
    }
    finish_out(out, path);
}

void write_hemo_csv(const std::string& path,
                    const dsp::FourChannelSeries& series) {
    series.validate();
    auto out = open_out(path);
    out << kHemoVersionLine << '\n';
    out << "# sample_rate_hz=" << format_double(series.sample_rate_hz) << '\n';
    out << kHemoHeader << '\n';
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_double(series.times[i]) << ','
            << format_double(series.ir1[i]) << ','
            << format_double(series.ir2[i]) << ','
            << format_double(series.d_chbo2[i]) << ','
            << format_double(series.d_chb[i]) << '\n';
    }
    finish_out(out, path);
}

dsp::FourChannelSeries read_hemo_csv(const std::string& path) {
    auto in = open_in(path);
    expect_version(in, kHemoVersionLine, path);

    dsp::FourChannelSeries series;
    std::string line = next_line(in);
    const std::string rate_prefix = "# sample_rate_hz=";
    if (line.rfind(rate_prefix, 0) == 0) {
        series.sample_rate_hz =
            parse_double(line.substr(rate_prefix.size()), path);
        line = next_line(in);
    }
    if (line != kHemoHeader) {
        throw SchemaError("unexpected hemo CSV header in " + path);
    }
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 5) {
            throw SchemaError("hemo CSV row must have 5 fields in " + path);
        }
        series.times.push_back(parse_double(fields[0], path));
        series.ir1.push_back(parse_double(fields[1], path));
        series.ir2.push_back(parse_double(fields[2], path));
        series.d_chbo2.push_back(parse_double(fields[3], path));
        series.d_chb.push_back(parse_double(fields[4], path));
    }
    series.validate();
    return series;
}

void write_features_csv(const std::string& path,
                        const std::vector<features::FeatureVector>& dataset) {
    auto out = open_out(path);
    out << kFeaturesVersionLine << '\n';
    const std::vector<std::string>& names =
        dataset.empty() ? features::feature_names() : dataset.front().names;
    for (const auto& name : names) {
        if (name.find(',') != std::string::npos ||
            name.find('\n') != std::string::npos) {
            throw ValidationError("feature name contains a delimiter: " + name);
        }
        out << name << ',';
    }
    out << "label,subject_id,window_start_t\n";
    for (const auto& row : dataset) {
        if (row.names != names) {
            throw SchemaError("inconsistent feature names in dataset");
        }
        if (row.values.size() != names.size()) {
            throw SchemaError("feature vector length does not match names");
        }
        if (row.subject_id.find(',') != std::string::npos ||
            row.subject_id.find('\n') != std::string::npos) {
            throw ValidationError("subject_id contains a delimiter: " +
                                  row.subject_id);
        }
        for (const double v : row.values) {
            out << format_double(v) << ',';
        }
        out << static_cast<int>(row.label) << ',' << row.subject_id << ','
            << format_double(row.window_start_t) << '\n';
    }
    finish_out(out, path);
}

std::vector<features::FeatureVector> read_features_csv(
    const std::string& path) {
    auto in = open_in(path);
    expect_version(in, kFeaturesVersionLine, path);

    const std::string header = next_line(in);
    const auto columns = split_csv(header);
    if (columns.size() < 4 || columns[columns.size() - 3] != "label" ||
        columns[columns.size() - 2] != "subject_id" ||
        columns.back() != "window_start_t") {
        throw SchemaError("unexpected features CSV header in " + path);
    }
    const std::vector<std::string> names(columns.begin(), columns.end() - 3);

    std::vector<features::FeatureVector> dataset;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != columns.size()) {
            throw SchemaError("features CSV row width mismatch in " + path);
        }
        features::FeatureVector row;
        row.names = names;
        row.values.reserve(names.size());
        for (std::size_t i = 0; i < names.size(); ++i) {
            row.values.push_back(parse_double(fields[i], path));
        }
        row.label = parse_label(fields[names.size()], path);
        row.subject_id = fields[names.size() + 1];
        row.window_start_t = parse_double(fields[names.size() + 2], path);
        dataset.push_back(std::move(row));
    }
    return dataset;
}

}  // namespace hemopipe::io
