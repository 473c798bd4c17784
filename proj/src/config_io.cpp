#include "itheta/config_io.hpp"

#include <fstream>
#include <sstream>

#include "itheta/errors.hpp"

namespace itheta {

namespace {

Rational entry(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const ValidationError& e) {
            throw ValidationError("schema: " + where + ": " + e.what());
        }
    }
    throw ValidationError("schema: " + where + ": expected an integer or a \"p/q\" string, got " +
                          std::string(j.type_name()));
}

VectorR row(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ValidationError("schema: " + where + ": expected an array");
    VectorR out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(entry(j[i], where + "/" + std::to_string(i)));
    return out;
}

std::vector<VectorR> rows(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ValidationError("schema: " + where + ": expected a non-empty array of arrays");
    std::vector<VectorR> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(row(j[i], where + "/" + std::to_string(i)));
    return out;
}

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

ConfigFile parse_config(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("malformed JSON at " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
    }
    if (!doc.is_object()) throw ValidationError("schema: /: expected an object");
    for (const auto& [key, value] : doc.items())
        if (key != "gram" && key != "vectors" && key != "basis" && key != "mu")
            throw ValidationError("schema: /" + key + ": unknown key");
    if (!doc.contains("gram")) throw ValidationError("schema: /gram: missing");
    if (!doc.contains("vectors")) throw ValidationError("schema: /vectors: missing");

    const auto g = rows(doc["gram"], "/gram");
    const std::size_t d = g.size();
    MatrixR gram(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        if (g[i].size() != d) throw ValidationError("schema: /gram/" + std::to_string(i) + ": gram must be square");
        for (std::size_t j = 0; j < d; ++j) gram(i, j) = g[i][j];
    }
    QuadraticSpace space(gram);
    auto vectors = rows(doc["vectors"], "/vectors");
    for (std::size_t i = 0; i < vectors.size(); ++i)
        if (vectors[i].size() != d)
            throw ValidationError("schema: /vectors/" + std::to_string(i) + ": expected " + std::to_string(d) +
                                  " entries");
    ConeConfig config(space, std::move(vectors));

    MatrixR basis = MatrixR::identity(d);
    if (doc.contains("basis")) {
        const auto b = rows(doc["basis"], "/basis");
        if (b.size() != d) throw ValidationError("schema: /basis: expected " + std::to_string(d) + " generators");
        for (std::size_t j = 0; j < d; ++j) {
            if (b[j].size() != d)
                throw ValidationError("schema: /basis/" + std::to_string(j) + ": expected " + std::to_string(d) +
                                      " entries");
            for (std::size_t i = 0; i < d; ++i) basis(i, j) = b[j][i];
        }
    }
    VectorR mu(d);
    if (doc.contains("mu")) {
        mu = row(doc["mu"], "/mu");
        if (mu.size() != d) throw ValidationError("schema: /mu: expected " + std::to_string(d) + " entries");
    }
    return ConfigFile{std::move(config), Lattice(space, std::move(basis), std::move(mu))};
}

ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

Json rational_json(const Rational& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return Json(q.get_num().get_si());
    return Json(to_string(q));
}

Json vector_json(std::span<const Rational> v) {
    Json out = Json::array();
    for (const auto& q : v) out.push_back(rational_json(q));
    return out;
}

Json config_json(const ConeConfig& config, const Lattice* lattice) {
    Json out = Json::object();
    Json gram = Json::array();
    const auto& g = config.space().gram();
    for (std::size_t i = 0; i < g.rows(); ++i) {
        VectorR r;
        for (std::size_t j = 0; j < g.cols(); ++j) r.push_back(g(i, j));
        gram.push_back(vector_json(r));
    }
    out["gram"] = gram;
    Json vs = Json::array();
    for (const auto& c : config.vectors()) vs.push_back(vector_json(c));
    out["vectors"] = vs;
    if (lattice) {
        Json b = Json::array();
        for (std::size_t j = 0; j < lattice->basis().cols(); ++j) b.push_back(vector_json(lattice->basis().column(j)));
        out["basis"] = b;
        out["mu"] = vector_json(lattice->mu());
    }
    return out;
}

VectorR parse_vector(std::string_view text) {
    VectorR out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        std::string trimmed(piece);
        trimmed.erase(0, trimmed.find_first_not_of(' '));
        trimmed.erase(trimmed.find_last_not_of(' ') + 1);
        out.push_back(parse_rational(trimmed));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace itheta
