#include "nbdet/serialize.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace nbdet {

namespace {
constexpr const char* kFormat = "nbdet-constellation";
constexpr int kVersion = 1;

nlohmann::json cplx_list(const std::vector<cplx>& values) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : values) arr.push_back({v.real(), v.imag()});
    return arr;
}

std::vector<cplx> parse_cplx_list(const nlohmann::json& arr) {
    std::vector<cplx> out;
    out.reserve(arr.size());
    for (const auto& e : arr) out.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return out;
}
}  // namespace

std::string constellation_to_json(const Constellation& c) {
    nlohmann::json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["n_bits"] = c.n_bits();
    std::vector<cplx> values;
    values.reserve(static_cast<std::size_t>(c.size()));
    for (const auto& p : c.points()) values.push_back(p.value);
    j["points"] = cplx_list(values);
    j["layers"] = c.layers() ? cplx_list(*c.layers()) : nlohmann::json();
    j["mapper"] = c.mapper_table().empty() ? nlohmann::json() : nlohmann::json(c.mapper_table());
    return j.dump(2);
}

Constellation constellation_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != kFormat)
        throw std::invalid_argument("constellation_from_json: unrecognized format tag");
    if (j.value("version", -1) != kVersion)
        throw std::invalid_argument("constellation_from_json: unsupported version");
    const int n_bits = j.at("n_bits").get<int>();
    std::vector<cplx> values = parse_cplx_list(j.at("points"));
    std::optional<std::vector<cplx>> layers;
    if (!j.at("layers").is_null()) layers = parse_cplx_list(j.at("layers"));
    std::vector<std::int32_t> mapper;
    const bool has_mapper = !j.at("mapper").is_null();
    if (has_mapper) mapper = j.at("mapper").get<std::vector<std::int32_t>>();
    return Constellation::from_parts(n_bits, std::move(values), std::move(layers),
                                     has_mapper ? &mapper : nullptr);
}

void save_constellation(const Constellation& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_constellation: cannot open " + path);
    out << constellation_to_json(c) << '\n';
}

Constellation load_constellation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_constellation: cannot open " + path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return constellation_from_json(text);
}

}  // namespace nbdet
