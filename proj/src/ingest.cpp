#include "radoppler/ingest.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "radoppler/error.hpp"

namespace radoppler {
namespace {

namespace fs = std::filesystem;

template <typename UInt>
void put_le(std::string& out, UInt value) {
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
        out.push_back(static_cast<char>((value >> (8 * i)) & 0xFFu));
    }
}

template <typename UInt>
UInt get_le(const unsigned char* p) {
    UInt v = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
        v |= static_cast<UInt>(p[i]) << (8 * i);
    }
    return v;
}

void put_f32(std::string& out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }
void put_f64(std::string& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
float get_f32(const unsigned char* p) { return std::bit_cast<float>(get_le<std::uint32_t>(p)); }
double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_le<std::uint64_t>(p)); }

void write_bytes(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InvalidInput("cannot write " + path.string());
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw InvalidInput("write failed for " + path.string());
    }
}

constexpr std::array<char, 4> kMagic = {'R', 'D', 'M', 'X'};
constexpr std::size_t kHeaderSize = 16;

std::string bin_header(std::uint8_t dtype, std::size_t rows, std::size_t cols) {
    if (rows > UINT32_MAX || cols > UINT32_MAX) {
        throw InvalidInput("matrix too large for the bin format");
    }
    std::string out(kMagic.begin(), kMagic.end());
    out.push_back(static_cast<char>(dtype));
    out.append(3, '\0');
    put_le(out, static_cast<std::uint32_t>(rows));
    put_le(out, static_cast<std::uint32_t>(cols));
    return out;
}

std::string pgm_bytes(const RealMatrix& magnitude) {
    const double peak = magnitude.maxCoeff();
    const double floor = peak > 0.0 ? 1e-12 * peak : 1.0;
    RealMatrix logs = magnitude.unaryExpr([floor](double v) { return std::log10(std::max(v, floor)); });
    const double lo = logs.minCoeff();
    const double hi = logs.maxCoeff();
    std::string out = "P5\n" + std::to_string(logs.cols()) + " " + std::to_string(logs.rows()) + "\n255\n";
    for (Eigen::Index r = 0; r < logs.rows(); ++r) {
        for (Eigen::Index c = 0; c < logs.cols(); ++c) {
            const double scaled = hi > lo ? (logs(r, c) - lo) / (hi - lo) * 255.0 : 0.0;
            out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(scaled))));
        }
    }
    return out;
}

void require_non_empty(Eigen::Index rows, Eigen::Index cols) {
    if (rows == 0 || cols == 0) {
        throw InvalidInput("cannot write an empty matrix");
    }
}

struct ParsedBin {
    std::uint8_t dtype;
    std::size_t rows;
    std::size_t cols;
    const unsigned char* payload;
};

ParsedBin parse_bin(const std::string& bytes, const fs::path& path) {
    if (bytes.size() < kHeaderSize) {
        throw InvalidInput(path.string() + ": truncated matrix header");
    }
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    ParsedBin bin{p[4], get_le<std::uint32_t>(p + 8), get_le<std::uint32_t>(p + 12), p + kHeaderSize};
    if (bin.dtype > 1) {
        throw InvalidInput(path.string() + ": unknown matrix dtype " + std::to_string(bin.dtype));
    }
    const std::size_t expected = kHeaderSize + bin.rows * bin.cols * 8 * (bin.dtype == 1 ? 2 : 1);
    if (bytes.size() != expected) {
        throw InvalidInput(path.string() + ": payload holds " + std::to_string(bytes.size() - kHeaderSize) +
                           " bytes, header declares " + std::to_string(expected - kHeaderSize));
    }
    return bin;
}

std::vector<std::vector<double>> parse_csv(const std::string& text, const fs::path& path) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        std::vector<double> row;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            row.push_back(parse_double(std::string_view(line).substr(pos, comma - pos), path.string()));
            if (comma == std::string::npos) {
                break;
            }
            pos = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw InvalidInput(path.string() + ": ragged csv row " + std::to_string(rows.size() + 1));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw InvalidInput(path.string() + ": empty matrix");
    }
    return rows;
}

RealMatrix parse_pgm(const std::string& bytes, const fs::path& path) {
    std::istringstream in(bytes);
    std::string magic;
    std::size_t width = 0;
    std::size_t height = 0;
    int maxval = 0;
    in >> magic >> width >> height >> maxval;
    if (!in || magic != "P5" || maxval != 255) {
        throw InvalidInput(path.string() + ": unsupported pgm header");
    }
    in.get();
    const auto offset = static_cast<std::size_t>(in.tellg());
    if (bytes.size() != offset + width * height) {
        throw InvalidInput(path.string() + ": pgm payload size mismatch");
    }
    RealMatrix m(height, width);
    for (std::size_t i = 0; i < width * height; ++i) {
        m(i / width, i % width) = static_cast<unsigned char>(bytes[offset + i]);
    }
    return m;
}

bool is_bin(const std::string& bytes) {
    return bytes.size() >= 4 && std::equal(kMagic.begin(), kMagic.end(), bytes.begin());
}

bool is_pgm(const std::string& bytes) { return bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5'; }

}  // namespace

void RadarParams::validate() const {
    if (num_fast_samples == 0 || num_chirps == 0) {
        throw InvalidInput("radar params: sample counts must be positive");
    }
    for (auto [name, v] : {std::pair{"sample_rate", sample_rate},
                           std::pair{"chirp_repetition_freq", chirp_repetition_freq},
                           std::pair{"center_freq", center_freq}, std::pair{"bandwidth", bandwidth}}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidInput(std::string("radar params: ") + name + " must be positive and finite");
        }
    }
    if (chirp_repetition_freq > sample_rate) {
        throw InvalidInput("radar params: chirp_repetition_freq exceeds sample_rate");
    }
}

void RadarParams::write_to(KeyValueFile& kv) const {
    kv.set("num_fast_samples", static_cast<std::uint64_t>(num_fast_samples));
    kv.set("num_chirps", static_cast<std::uint64_t>(num_chirps));
    kv.set("sample_rate", sample_rate);
    kv.set("chirp_repetition_freq", chirp_repetition_freq);
    kv.set("center_freq", center_freq);
    kv.set("bandwidth", bandwidth);
}

RadarParams RadarParams::read_from(const KeyValueFile& kv) {
    RadarParams p;
    p.num_fast_samples = kv.require_count("num_fast_samples");
    p.num_chirps = kv.require_count("num_chirps");
    p.sample_rate = kv.require_double("sample_rate");
    p.chirp_repetition_freq = kv.require_double("chirp_repetition_freq");
    p.center_freq = kv.require_double("center_freq");
    p.bandwidth = kv.require_double("bandwidth");
    p.validate();
    return p;
}

void RadarCube::validate() const {
    params.validate();
    if (static_cast<std::size_t>(samples.rows()) != params.num_fast_samples ||
        static_cast<std::size_t>(samples.cols()) != params.num_chirps) {
        throw InvalidInput("radar cube: sample matrix is " + std::to_string(samples.rows()) + "x" +
                           std::to_string(samples.cols()) + ", params declare " +
                           std::to_string(params.num_fast_samples) + "x" + std::to_string(params.num_chirps));
    }
    for (Eigen::Index i = 0; i < samples.size(); ++i) {
        const auto z = samples.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw InvalidInput("radar cube: non-finite sample at fast=" + std::to_string(i % samples.rows()) +
                               " chirp=" + std::to_string(i / samples.rows()));
        }
    }
}

std::string_view to_string(WindowKind kind) {
    switch (kind) {
        case WindowKind::hann: return "hann";
        case WindowKind::hamming: return "hamming";
        case WindowKind::rect: return "rect";
    }
    return "?";
}

WindowKind parse_window_kind(std::string_view text) {
    const std::string s = trim(text);
    if (s == "hann") return WindowKind::hann;
    if (s == "hamming") return WindowKind::hamming;
    if (s == "rect") return WindowKind::rect;
    throw InvalidInput("unknown window kind '" + s + "'");
}

void PipelineConfig::validate() const {
    if (range_bin_end && range_bin_start > *range_bin_end) {
        throw InvalidInput("config: range_bin_start > range_bin_end");
    }
    if (hop < 1 || hop > window_length || window_length > fft_length) {
        throw InvalidInput("config: need 1 <= hop <= window_length <= fft_length");
    }
    if (fft_length % 2 != 0) {
        throw InvalidInput("config: fft_length must be even for a symmetric frequency axis");
    }
    if (num_filters < 2) {
        throw InvalidInput("config: num_filters must be >= 2");
    }
    if (!(log_floor > 0.0)) {
        throw InvalidInput("config: log_floor must be > 0");
    }
    if (!(notch_cutoff > 0.0)) {
        throw InvalidInput("config: notch_cutoff must be > 0");
    }
    if (notch_order < 2 || notch_order % 2 != 0) {
        throw InvalidInput("config: notch_order must be even and >= 2");
    }
}

void PipelineConfig::validate(std::size_t num_range_bins) const {
    validate();
    if (num_range_bins == 0 || resolved_range_end(num_range_bins) >= num_range_bins ||
        range_bin_start > resolved_range_end(num_range_bins)) {
        throw InvalidInput("config: range bins [" + std::to_string(range_bin_start) + ", " +
                           std::to_string(resolved_range_end(num_range_bins)) + "] outside 0.." +
                           std::to_string(num_range_bins == 0 ? 0 : num_range_bins - 1));
    }
}

std::size_t PipelineConfig::resolved_range_end(std::size_t num_range_bins) const {
    if (range_bin_end) {
        return *range_bin_end;
    }
    return num_range_bins == 0 ? 0 : num_range_bins - 1;
}

void PipelineConfig::write_to(KeyValueFile& kv, std::string_view prefix) const {
    const std::string p(prefix);
    kv.set(p + "range_bin_start", static_cast<std::uint64_t>(range_bin_start));
    if (range_bin_end) {
        kv.set(p + "range_bin_end", static_cast<std::uint64_t>(*range_bin_end));
    }
    kv.set(p + "window_kind", std::string(to_string(window_kind)));
    kv.set(p + "window_length", static_cast<std::uint64_t>(window_length));
    kv.set(p + "hop", static_cast<std::uint64_t>(hop));
    kv.set(p + "fft_length", static_cast<std::uint64_t>(fft_length));
    kv.set(p + "notch_cutoff", notch_cutoff);
    kv.set(p + "notch_order", static_cast<std::uint64_t>(notch_order));
    kv.set(p + "num_filters", static_cast<std::uint64_t>(num_filters));
    kv.set(p + "log_floor", log_floor);
    kv.set(p + "coherent", std::string(coherent ? "true" : "false"));
}

PipelineConfig PipelineConfig::read_from(const KeyValueFile& kv) {
    static constexpr std::string_view known[] = {
        "range_bin_start", "range_bin_end", "window_kind", "window_length", "hop", "fft_length",
        "notch_cutoff",    "notch_order",   "num_filters", "log_floor",     "coherent"};
    for (const auto& [key, value] : kv.entries()) {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw InvalidInput(kv.source() + ": unknown config key '" + key + "'");
        }
    }
    PipelineConfig c;
    const auto what = [&](std::string_view k) { return kv.source() + ": " + std::string(k); };
    if (auto v = kv.find("range_bin_start")) c.range_bin_start = parse_count(*v, what("range_bin_start"));
    if (auto v = kv.find("range_bin_end")) c.range_bin_end = parse_count(*v, what("range_bin_end"));
    if (auto v = kv.find("window_kind")) c.window_kind = parse_window_kind(*v);
    if (auto v = kv.find("window_length")) c.window_length = parse_count(*v, what("window_length"));
    if (auto v = kv.find("hop")) c.hop = parse_count(*v, what("hop"));
    if (auto v = kv.find("fft_length")) c.fft_length = parse_count(*v, what("fft_length"));
    if (auto v = kv.find("notch_cutoff")) c.notch_cutoff = parse_double(*v, what("notch_cutoff"));
    if (auto v = kv.find("notch_order")) c.notch_order = static_cast<int>(parse_count(*v, what("notch_order")));
    if (auto v = kv.find("num_filters")) c.num_filters = parse_count(*v, what("num_filters"));
    if (auto v = kv.find("log_floor")) c.log_floor = parse_double(*v, what("log_floor"));
    if (auto v = kv.find("coherent")) c.coherent = parse_bool(*v, what("coherent"));
    c.validate();
    return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    return read_from(KeyValueFile::load(path));
}

std::filesystem::path cube_payload_path(const std::filesystem::path& path) {
    auto p = path;
    if (p.extension() == ".iq" || p.extension() == ".meta") {
        p.replace_extension();
    }
    p += ".iq";
    return p;
}

std::filesystem::path cube_meta_path(const std::filesystem::path& path) {
    auto p = cube_payload_path(path);
    p.replace_extension(".meta");
    return p;
}

RadarCube load_radar_cube(const std::filesystem::path& path) {
    const auto meta_path = cube_meta_path(path);
    if (!fs::exists(meta_path)) {
        throw InvalidInput("missing cube sidecar " + meta_path.string());
    }
    RadarCube cube;
    cube.params = RadarParams::read_from(KeyValueFile::load(meta_path));
    const std::string bytes = read_file_bytes(cube_payload_path(path));
    const std::size_t n = cube.params.num_fast_samples * cube.params.num_chirps;
    if (bytes.size() != n * 8) {
        throw InvalidInput("cube payload " + cube_payload_path(path).string() + " holds " +
                           std::to_string(bytes.size()) + " bytes, metadata declares " +
                           std::to_string(cube.params.num_fast_samples) + "x" +
                           std::to_string(cube.params.num_chirps) + " = " + std::to_string(n * 8) + " bytes");
    }
    cube.samples.resize(static_cast<Eigen::Index>(cube.params.num_fast_samples),
                        static_cast<Eigen::Index>(cube.params.num_chirps));
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    for (std::size_t i = 0; i < n; ++i) {
        cube.samples.data()[i] = {get_f32(p + 8 * i), get_f32(p + 8 * i + 4)};
    }
    cube.validate();
    return cube;
}

void write_radar_cube(const RadarCube& cube, const std::filesystem::path& path) {
    cube.validate();
    std::string bytes;
    bytes.reserve(static_cast<std::size_t>(cube.samples.size()) * 8);
    for (Eigen::Index i = 0; i < cube.samples.size(); ++i) {
        put_f32(bytes, cube.samples.data()[i].real());
        put_f32(bytes, cube.samples.data()[i].imag());
    }
    write_bytes(cube_payload_path(path), bytes);
    KeyValueFile meta;
    cube.params.write_to(meta);
    meta.save(cube_meta_path(path));
}

std::string_view to_string(MatrixFormat format) {
    switch (format) {
        case MatrixFormat::csv: return "csv";
        case MatrixFormat::bin: return "bin";
        case MatrixFormat::pgm: return "pgm";
    }
    return "?";
}

MatrixFormat parse_matrix_format(std::string_view text) {
    const std::string s = trim(text);
    if (s == "csv") return MatrixFormat::csv;
    if (s == "bin") return MatrixFormat::bin;
    if (s == "pgm") return MatrixFormat::pgm;
    throw InvalidInput("unknown matrix format '" + s + "'");
}

void write_matrix(const RealMatrix& matrix, const std::filesystem::path& path, MatrixFormat format) {
    require_non_empty(matrix.rows(), matrix.cols());
    std::string bytes;
    switch (format) {
        case MatrixFormat::csv:
            for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
                for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
                    if (c > 0) bytes.push_back(',');
                    bytes += format_double(matrix(r, c));
                }
                bytes.push_back('\n');
            }
            break;
        case MatrixFormat::bin:
            bytes = bin_header(0, matrix.rows(), matrix.cols());
            for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
                for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
                    put_f64(bytes, matrix(r, c));
                }
            }
            break;
        case MatrixFormat::pgm:
            bytes = pgm_bytes(matrix.cwiseAbs());
            break;
    }
    write_bytes(path, bytes);
}

void write_matrix(const ComplexMatrix& matrix, const std::filesystem::path& path, MatrixFormat format) {
    require_non_empty(matrix.rows(), matrix.cols());
    std::string bytes;
    switch (format) {
        case MatrixFormat::csv:
            for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
                for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
                    if (c > 0) bytes.push_back(',');
                    bytes += format_double(matrix(r, c).real());
                    bytes.push_back(',');
                    bytes += format_double(matrix(r, c).imag());
                }
                bytes.push_back('\n');
            }
            break;
        case MatrixFormat::bin:
            bytes = bin_header(1, matrix.rows(), matrix.cols());
            for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
                for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
                    put_f64(bytes, matrix(r, c).real());
                    put_f64(bytes, matrix(r, c).imag());
                }
            }
            break;
        case MatrixFormat::pgm:
            bytes = pgm_bytes(matrix.cwiseAbs());
            break;
    }
    write_bytes(path, bytes);
}

RealMatrix load_matrix(const std::filesystem::path& path) {
    const std::string bytes = read_file_bytes(path);
    if (is_bin(bytes)) {
        const auto bin = parse_bin(bytes, path);
        if (bin.dtype != 0) {
            throw InvalidInput(path.string() + ": complex matrix where a real one was expected");
        }
        RealMatrix m(bin.rows, bin.cols);
        for (std::size_t i = 0; i < bin.rows * bin.cols; ++i) {
            m.data()[i] = get_f64(bin.payload + 8 * i);
        }
        return m;
    }
    if (is_pgm(bytes)) {
        return parse_pgm(bytes, path);
    }
    const auto rows = parse_csv(bytes, path);
    RealMatrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m(r, c) = rows[r][c];
        }
    }
    return m;
}

ComplexMatrix load_complex_matrix(const std::filesystem::path& path) {
    const std::string bytes = read_file_bytes(path);
    if (is_bin(bytes)) {
        const auto bin = parse_bin(bytes, path);
        ComplexMatrix m(bin.rows, bin.cols);
        const std::size_t stride = bin.dtype == 1 ? 16 : 8;
        for (std::size_t i = 0; i < bin.rows * bin.cols; ++i) {
            const double re = get_f64(bin.payload + stride * i);
            const double im = bin.dtype == 1 ? get_f64(bin.payload + stride * i + 8) : 0.0;
            m.data()[i] = {re, im};
        }
        return m;
    }
    if (is_pgm(bytes)) {
        throw InvalidInput(path.string() + ": pgm cannot hold complex values");
    }
    const auto rows = parse_csv(bytes, path);
    if (rows.front().size() % 2 != 0) {
        throw InvalidInput(path.string() + ": complex csv needs an even column count");
    }
    ComplexMatrix m(rows.size(), rows.front().size() / 2);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size() / 2; ++c) {
            m(r, c) = {rows[r][2 * c], rows[r][2 * c + 1]};
        }
    }
    return m;
}

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace radoppler
