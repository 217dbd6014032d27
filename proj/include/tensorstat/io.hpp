#pragma once

// Tensor file formats.
//
// JSON:   {"kind":"tensor","shape":[n1,...],"data":[...]}
//         {"kind":"square2d","rowShape":[n1,...],"shape":[n1,...,n1,...],"data":[...]}
//         data is column-major; doubles are written in shortest round-trip form.
// Binary: "TST1", u8 order, u32 dims[order], f64 payload (little-endian, column-major).
//
// Sample files hold several tensors of one shape:
// JSON:   a bare array of tensor objects, or
//         {"kind":"samples","shape":[...],"count":N,"seed":S,"stream":T,"observations":[...]}
// Binary: u64 count, then one "TST1" header, then count * nstar f64.

#include "tensorstat/distributions.hpp"
#include "tensorstat/error.hpp"
#include "tensorstat/linalg.hpp"
#include "tensorstat/stats.hpp"
#include "tensorstat/tensor.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tensorstat::io {

using json = nlohmann::json;
using AnyTensor = std::variant<DenseTensor, SquareTensor>;

inline constexpr std::string_view kBinaryMagic = "TST1";

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline std::vector<std::size_t> dims_from_json(const json& j, const char* field) {
    if (!j.is_array() || j.empty())
        throw FormatError(std::string("'") + field + "' must be a non-empty array");
    std::vector<std::size_t> dims;
    for (const auto& d : j) {
        if (!d.is_number_integer() || d.get<long long>() <= 0)
            throw FormatError(std::string("'") + field + "' entries must be positive integers");
        dims.push_back(d.get<std::size_t>());
    }
    return dims;
}

inline std::vector<double> data_from_json(const json& j) {
    if (!j.is_array())
        throw FormatError("'data' must be an array");
    std::vector<double> data;
    data.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number())
            throw FormatError("'data' entries must be numbers");
        data.push_back(v.get<double>());
    }
    return data;
}

inline json dims_to_json(const Shape& s) { return json(s.dims()); }

inline json data_to_json(std::span<const double> data) {
    return json(std::vector<double>(data.begin(), data.end()));
}

}  // namespace detail

inline json to_json(const DenseTensor& t) {
    return json{{"kind", "tensor"},
                {"shape", detail::dims_to_json(t.shape())},
                {"data", detail::data_to_json(t.data())}};
}

inline json to_json(const SquareTensor& t) {
    return json{{"kind", "square2d"},
                {"rowShape", detail::dims_to_json(t.row_shape())},
                {"shape", detail::dims_to_json(t.row_shape().concat(t.row_shape()))},
                {"data", detail::data_to_json(t.data())}};
}

inline json to_json(const AnyTensor& t) {
    return std::visit([](const auto& v) { return to_json(v); }, t);
}

inline AnyTensor any_from_json(const json& j) {
    if (!j.is_object())
        throw FormatError("tensor must be a JSON object");
    if (!j.contains("data"))
        throw FormatError("tensor object has no 'data'");
    std::string kind = "tensor";
    try {
        if (j.contains("kind"))
            kind = j.at("kind").get<std::string>();
        if (kind == "tensor") {
            if (!j.contains("shape"))
                throw FormatError("tensor object has no 'shape'");
            return DenseTensor(Shape(detail::dims_from_json(j.at("shape"), "shape")),
                               detail::data_from_json(j.at("data")));
        }
        if (kind == "square2d") {
            if (!j.contains("rowShape"))
                throw FormatError("square2d object has no 'rowShape'");
            Shape row(detail::dims_from_json(j.at("rowShape"), "rowShape"));
            if (j.contains("shape") &&
                detail::dims_from_json(j.at("shape"), "shape") != row.concat(row).dims())
                throw FormatError("square2d 'shape' is not rowShape x rowShape");
            return SquareTensor(std::move(row), detail::data_from_json(j.at("data")));
        }
    } catch (const FormatError&) {
        throw;
    } catch (const InputError& e) {
        throw FormatError(e.what());
    } catch (const json::exception& e) {
        throw FormatError(e.what());
    }
    throw FormatError("unknown tensor kind '" + kind + "'");
}

inline DenseTensor as_dense(AnyTensor t) {
    if (auto* sq = std::get_if<SquareTensor>(&t))
        return sq->as_tensor();
    return std::get<DenseTensor>(std::move(t));
}

inline SquareTensor as_square(AnyTensor t) {
    if (auto* sq = std::get_if<SquareTensor>(&t))
        return std::move(*sq);
    try {
        return SquareTensor::from_tensor(std::get<DenseTensor>(t));
    } catch (const ShapeError& e) {
        throw FormatError(std::string("expected a square2d tensor: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// binary

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b)
        out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b)
        out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

inline void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::uint64_t uint(int width) {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int b = 0; b < width; ++b)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + b]))
                 << (8 * b);
        pos_ += static_cast<std::size_t>(width);
        return v;
    }

    double f64() { return std::bit_cast<double>(uint(8)); }

    void magic() {
        need(kBinaryMagic.size());
        if (bytes_.substr(pos_, kBinaryMagic.size()) != kBinaryMagic)
            throw FormatError("bad binary magic");
        pos_ += kBinaryMagic.size();
    }

    Shape header() {
        magic();
        const auto order = static_cast<std::size_t>(uint(1));
        if (order == 0)
            throw FormatError("binary tensor has order 0");
        std::vector<std::size_t> dims(order);
        for (auto& d : dims) {
            d = static_cast<std::size_t>(uint(4));
            if (d == 0)
                throw FormatError("binary tensor has a zero dimension");
        }
        return Shape(std::move(dims));
    }

    std::vector<double> payload(std::size_t count) {
        if (count > (bytes_.size() - pos_) / 8)
            throw FormatError("truncated binary payload");
        std::vector<double> data(count);
        for (auto& v : data)
            v = f64();
        return data;
    }

    void finish() const {
        if (pos_ != bytes_.size())
            throw FormatError("trailing bytes after binary payload");
    }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n)
            throw FormatError("truncated binary file");
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

inline void put_header(std::string& out, const Shape& s) {
    if (s.order() > 255)
        throw FormatError("binary format supports order <= 255");
    out.append(kBinaryMagic);
    out.push_back(static_cast<char>(s.order()));
    for (std::size_t d : s.dims()) {
        if (d > 0xFFFFFFFFu)
            throw FormatError("binary format supports dimensions < 2^32");
        put_u32(out, static_cast<std::uint32_t>(d));
    }
}

}  // namespace detail

inline std::string encode_binary(const DenseTensor& t) {
    std::string out;
    detail::put_header(out, t.shape());
    for (double v : t.data())
        detail::put_f64(out, v);
    return out;
}

inline std::string encode_binary(const AnyTensor& t) { return encode_binary(as_dense(t)); }

inline DenseTensor decode_binary(std::string_view bytes) {
    detail::Reader r(bytes);
    try {
        Shape shape = r.header();
        auto data = r.payload(shape.nstar());
        r.finish();
        return DenseTensor(std::move(shape), std::move(data));
    } catch (const FormatError&) {
        throw;
    } catch (const InputError& e) {
        throw FormatError(e.what());
    }
}

inline std::string encode_binary_samples(const SampleSet& s) {
    std::string out;
    detail::put_u64(out, s.size());
    detail::put_header(out, s.shape());
    for (const auto& x : s)
        for (double v : x.data())
            detail::put_f64(out, v);
    return out;
}

inline SampleSet decode_binary_samples(std::string_view bytes) {
    detail::Reader r(bytes);
    try {
        const std::uint64_t count = r.uint(8);
        Shape shape = r.header();
        std::vector<DenseTensor> obs;
        for (std::uint64_t k = 0; k < count; ++k)
            obs.emplace_back(shape, r.payload(shape.nstar()));
        r.finish();
        return SampleSet(std::move(shape), std::move(obs));
    } catch (const FormatError&) {
        throw;
    } catch (const InputError& e) {
        throw FormatError(e.what());
    }
}

inline bool looks_binary_tensor(std::string_view bytes) {
    return bytes.substr(0, kBinaryMagic.size()) == kBinaryMagic;
}

inline bool looks_binary_samples(std::string_view bytes) {
    return bytes.size() >= 12 && bytes.substr(8, kBinaryMagic.size()) == kBinaryMagic;
}

// ---------------------------------------------------------------------------
// sample sets

struct SampleFile {
    SampleSet samples;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> stream;
};

inline json samples_to_json(const SampleSet& s, std::optional<std::uint64_t> seed = {},
                            std::optional<std::uint64_t> stream = {}) {
    json obs = json::array();
    for (const auto& x : s)
        obs.push_back(to_json(x));
    json j{{"kind", "samples"},
           {"shape", detail::dims_to_json(s.shape())},
           {"count", s.size()},
           {"observations", std::move(obs)}};
    if (seed)
        j["seed"] = *seed;
    if (stream)
        j["stream"] = *stream;
    return j;
}

inline SampleFile samples_from_json(const json& j) {
    try {
        if (j.is_array()) {
            std::vector<DenseTensor> obs;
            for (const auto& t : j)
                obs.push_back(as_dense(any_from_json(t)));
            if (obs.empty())
                throw FormatError("bare sample array is empty; use the samples object form");
            return SampleFile{SampleSet::from(std::move(obs)), {}, {}};
        }
        if (!j.is_object() || j.value("kind", "") != "samples")
            throw FormatError("expected a sample array or a {\"kind\":\"samples\"} object");
        Shape shape(detail::dims_from_json(j.at("shape"), "shape"));
        std::vector<DenseTensor> obs;
        for (const auto& t : j.at("observations"))
            obs.push_back(as_dense(any_from_json(t)));
        if (j.contains("count") && j.at("count").get<std::size_t>() != obs.size())
            throw FormatError("sample 'count' does not match the number of observations");
        SampleFile f{SampleSet(std::move(shape), std::move(obs)), {}, {}};
        if (j.contains("seed"))
            f.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("stream"))
            f.stream = j.at("stream").get<std::uint64_t>();
        return f;
    } catch (const FormatError&) {
        throw;
    } catch (const InputError& e) {
        throw FormatError(e.what());
    } catch (const json::exception& e) {
        throw FormatError(e.what());
    }
}

// ---------------------------------------------------------------------------
// distribution parameters
//
// {"location": <tensor>, "scale": <square2d>}            dense scale
// {"location": <tensor>, "factors": [<tensor n_i x n_i>, ...]}  Kronecker scale

struct ParamsFile {
    DenseTensor location;
    ScaleSpec scale;
};

inline json params_to_json(const DenseTensor& location, const ScaleSpec& scale) {
    json j{{"location", to_json(location)}};
    if (const auto* dense = std::get_if<SquareTensor>(&scale)) {
        j["scale"] = to_json(*dense);
    } else {
        json factors = json::array();
        for (const auto& f : std::get<KroneckerFactors>(scale).factors()) {
            const auto n = static_cast<std::size_t>(f.rows());
            factors.push_back(to_json(
                DenseTensor(Shape{n, n}, std::vector<double>(f.data(), f.data() + f.size()))));
        }
        j["factors"] = std::move(factors);
    }
    return j;
}

inline ParamsFile params_from_json(const json& j) {
    try {
        if (!j.is_object() || !j.contains("location"))
            throw FormatError("params file needs a 'location' tensor");
        DenseTensor location = as_dense(any_from_json(j.at("location")));
        if (j.contains("scale"))
            return ParamsFile{std::move(location), as_square(any_from_json(j.at("scale")))};
        if (j.contains("factors")) {
            std::vector<Eigen::MatrixXd> factors;
            for (const auto& f : j.at("factors")) {
                DenseTensor t = as_dense(any_from_json(f));
                if (t.shape().order() != 2 || t.shape().dim(0) != t.shape().dim(1))
                    throw FormatError("Kronecker factors must be n x n tensors");
                const auto n = static_cast<Eigen::Index>(t.shape().dim(0));
                factors.emplace_back(Eigen::Map<const Eigen::MatrixXd>(t.data().data(), n, n));
            }
            return ParamsFile{std::move(location), KroneckerFactors(std::move(factors))};
        }
        throw FormatError("params file needs 'scale' or 'factors'");
    } catch (const FormatError&) {
        throw;
    } catch (const InputError& e) {
        throw FormatError(e.what());
    } catch (const json::exception& e) {
        throw FormatError(e.what());
    }
}

// ---------------------------------------------------------------------------
// files; "-" is stdin / stdout

inline std::string read_bytes(const std::string& path) {
    if (path == "-")
        return std::string(std::istreambuf_iterator<char>(std::cin), {});
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void write_bytes(const std::string& path, std::string_view bytes) {
    if (path == "-") {
        std::cout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw FormatError("cannot write '" + path + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw FormatError("write to '" + path + "' failed");
}

/// Output paths ending in ".tst" get the binary format.
inline bool wants_binary(const std::string& path) {
    return path.size() > 4 && path.compare(path.size() - 4, 4, ".tst") == 0;
}

inline json parse_json(const std::string& bytes, const std::string& path) {
    try {
        return json::parse(bytes);
    } catch (const json::exception& e) {
        throw FormatError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline AnyTensor read_tensor_file(const std::string& path) {
    const std::string bytes = read_bytes(path);
    if (looks_binary_tensor(bytes))
        return decode_binary(bytes);
    return any_from_json(parse_json(bytes, path));
}

inline void write_tensor_file(const std::string& path, const AnyTensor& t) {
    if (wants_binary(path))
        write_bytes(path, encode_binary(t));
    else
        write_bytes(path, to_json(t).dump() + "\n");
}

/// A sample file, or a directory of single-tensor files read in filename order.
inline SampleFile read_sample_file(const std::string& path) {
    namespace fs = std::filesystem;
    if (path != "-" && fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path))
            if (entry.is_regular_file())
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        std::vector<DenseTensor> obs;
        for (const auto& f : files)
            obs.push_back(as_dense(read_tensor_file(f.string())));
        if (obs.empty())
            throw FormatError("sample directory '" + path + "' is empty");
        try {
            return SampleFile{SampleSet::from(std::move(obs)), {}, {}};
        } catch (const InputError& e) {
            throw FormatError(e.what());
        }
    }
    const std::string bytes = read_bytes(path);
    if (looks_binary_samples(bytes))
        return SampleFile{decode_binary_samples(bytes), {}, {}};
    return samples_from_json(parse_json(bytes, path));
}

inline void write_sample_file(const std::string& path, const SampleSet& s,
                              std::optional<std::uint64_t> seed = {},
                              std::optional<std::uint64_t> stream = {}) {
    if (wants_binary(path))
        write_bytes(path, encode_binary_samples(s));
    else
        write_bytes(path, samples_to_json(s, seed, stream).dump() + "\n");
}

inline ParamsFile read_params_file(const std::string& path) {
    return params_from_json(parse_json(read_bytes(path), path));
}

}  // namespace tensorstat::io
