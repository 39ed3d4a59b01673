#include "hw/json_io.hpp"

#include "hw/error.hpp"

namespace hw {

json to_json(const Coefficient& c)
{
    json out = json::array();
    for (const auto& [m, q] : c.terms()) {
        json vars = json::object();
        for (const auto& [s, e] : m.factors()) vars[s.name()] = e;
        out.push_back({{"vars", vars}, {"q", q.get_str()}});
    }
    return out;
}

Coefficient coefficient_from_json(const json& j)
{
    if (!j.is_array()) throw Error(ErrorKind::InvalidArgument, "coefficient must be a JSON array");
    Coefficient c;
    for (const auto& t : j) {
        Rational q(t.at("q").get<std::string>());
        q.canonicalize();
        Coefficient term(q);
        for (const auto& [name, e] : t.at("vars").items())
            term = term * Coefficient::symbol(Symbol::parse(name), e.get<unsigned>());
        c += term;
    }
    return c;
}

namespace {

json integer_json(const Integer& z)
{
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

Integer integer_from_json(const json& j)
{
    if (j.is_number_integer()) return Integer(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) return Integer(j.get<std::string>());
    throw Error(ErrorKind::InvalidArgument, "matrix entry must be an integer or a string");
}

} // namespace

json to_json(const ProjMatrix& m)
{
    return json::array({integer_json(m.a()), integer_json(m.b()), integer_json(m.c()), integer_json(m.d())});
}

ProjMatrix matrix_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 4) throw Error(ErrorKind::InvalidArgument, "matrix must be [a, b, c, d]");
    return ProjMatrix::from_integers(integer_from_json(j[0]), integer_from_json(j[1]), integer_from_json(j[2]),
                                     integer_from_json(j[3]));
}

json to_json(const Element& x)
{
    json out = json::array();
    for (const auto& [m, c] : x.terms()) out.push_back({{"coeff", to_json(c)}, {"matrix", to_json(m)}});
    return out;
}

Element element_from_json(const json& j)
{
    if (!j.is_array()) throw Error(ErrorKind::InvalidArgument, "element must be a JSON array");
    Element x;
    for (const auto& t : j) x.add_term(matrix_from_json(t.at("matrix")), coefficient_from_json(t.at("coeff")));
    return x;
}

json to_json(const MatrixClass& c)
{
    json out = {{"kind", std::string(to_string(c.kind))}, {"tau", c.tau.get_str()}};
    if (c.order) out["order"] = *c.order;
    else out["order"] = "infinite";
    return out;
}

json to_json(const Step& s, long level)
{
    json out = {{"rule", s.rule}, {"inputs", s.inputs}, {"output", to_json(s.output)},
                {"output_text", s.output.to_string(level)}, {"justification", s.justification}};
    if (!s.detail.empty()) out["detail"] = s.detail;
    out["certified"] = s.has_certificate;
    if (s.axiom) out["axiom"] = true;
    return out;
}

json to_json(const DerivationLog& log, long level)
{
    json out = json::array();
    for (const auto& s : log.steps()) out.push_back(to_json(s, level));
    return out;
}

} // namespace hw
