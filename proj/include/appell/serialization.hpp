#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

#include "appell/cauchy_extraction.hpp"
#include "appell/operator_kernel.hpp"
#include "appell/transforms.hpp"

namespace appell::jsonio {

/// Fixed 17-significant-digit formatting; keeps emitted files byte-stable.
inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt(Complex v) {
    if (v.imag() == 0.0) return fmt(v.real());
    return "[" + fmt(v.real()) + ", " + fmt(v.imag()) + "]";
}

inline std::string fmt(const MultiIndex& a) {
    std::string s = "[";
    for (int i = 0; i < a.dim(); ++i) {
        if (i) s += ", ";
        s += std::to_string(a[i]);
    }
    return s + "]";
}

inline std::string component_to_json(const ComponentMeasure& c) {
    using Kind = ComponentMeasure::Kind;
    switch (c.kind()) {
        case Kind::Gaussian:
            return "{\"kind\": \"gaussian\", \"mean\": " + fmt(c.param_a()) +
                   ", \"variance\": " + fmt(c.param_b()) + "}";
        case Kind::Gamma:
            return "{\"kind\": \"gamma\", \"shape\": " + fmt(c.param_a()) + ", \"scale\": " + fmt(c.param_b()) +
                   "}";
        case Kind::Poisson:
            return "{\"kind\": \"poisson\", \"rate\": " + fmt(c.param_a()) + "}";
        case Kind::Uniform:
            return "{\"kind\": \"uniform\", \"a\": " + fmt(c.param_a()) + ", \"b\": " + fmt(c.param_b()) + "}";
        case Kind::TwoPoint:
            return "{\"kind\": \"two_point\", \"x1\": " + fmt(c.param_a()) + ", \"x2\": " + fmt(c.param_b()) +
                   ", \"p1\": " + fmt(c.param_p()) + "}";
    }
    throw Error("component_to_json: unreachable");
}

inline std::string measure_to_json(const ProductMeasure& mu) {
    std::string s = "{\"components\": [";
    for (int i = 0; i < mu.dim(); ++i) {
        if (i) s += ", ";
        s += component_to_json(mu.component(i));
    }
    return s + "]}";
}

inline ComponentMeasure component_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian") return ComponentMeasure::gaussian(j.at("mean").get<double>(), j.at("variance").get<double>());
    if (kind == "gamma") return ComponentMeasure::gamma(j.at("shape").get<double>(), j.at("scale").get<double>());
    if (kind == "poisson") return ComponentMeasure::poisson(j.at("rate").get<double>());
    if (kind == "uniform") return ComponentMeasure::uniform(j.at("a").get<double>(), j.at("b").get<double>());
    if (kind == "two_point")
        return ComponentMeasure::two_point(j.at("x1").get<double>(), j.at("x2").get<double>(),
                                           j.at("p1").get<double>());
    throw Error("component_from_json: unknown measure kind '" + kind + "'");
}

inline ProductMeasure measure_from_json(const nlohmann::json& j) {
    std::vector<ComponentMeasure> cs;
    for (const auto& cj : j.at("components")) cs.push_back(component_from_json(cj));
    return ProductMeasure(std::move(cs));
}

inline Complex complex_from_json(const nlohmann::json& j) {
    if (j.is_array()) {
        if (j.size() != 2) throw Error("complex value must be a number or [re, im]");
        return Complex(j[0].get<double>(), j[1].get<double>());
    }
    return Complex(j.get<double>(), 0.0);
}

namespace detail {

template <typename BlockAccess>
std::string blocks_to_json(int Mout, int Min, BlockAccess&& block, const std::string& indent) {
    std::string s = "[";
    bool first_block = true;
    for (int m = 0; m <= Mout; ++m)
        for (int n = 0; n <= Min; ++n) {
            const BiSymTensor* f = block(m, n);
            if (!f) continue;
            if (!first_block) s += ",";
            first_block = false;
            s += "\n" + indent + "  {\"m\": " + std::to_string(m) + ", \"n\": " + std::to_string(n) +
                 ", \"entries\": [";
            bool first_entry = true;
            for (int rg = 0; rg < f->out_set().size(); ++rg)
                for (int rd = 0; rd < f->in_set().size(); ++rd) {
                    const Complex v = (*f)(rg, rd);
                    if (v == Complex(0.0)) continue;
                    if (!first_entry) s += ",";
                    first_entry = false;
                    s += "\n" + indent + "    {\"gamma\": " + fmt(f->out_set()[rg]) +
                         ", \"delta\": " + fmt(f->in_set()[rd]) + ", \"value\": " + fmt(v) + "}";
                }
            s += first_entry ? "]}" : "\n" + indent + "  ]}";
        }
    s += first_block ? "]" : "\n" + indent + "]";
    return s;
}

template <typename SetBlock>
void blocks_from_json(const nlohmann::json& j, int d, SetBlock&& set_block) {
    for (const auto& bj : j.at("blocks")) {
        const int m = bj.at("m").get<int>();
        const int n = bj.at("n").get<int>();
        std::vector<SymbolGerm::Entry> entries;
        for (const auto& ej : bj.at("entries")) {
            SymbolGerm::Entry e;
            e.gamma = MultiIndex(ej.at("gamma").get<std::vector<int>>());
            e.delta = MultiIndex(ej.at("delta").get<std::vector<int>>());
            e.value = complex_from_json(ej.at("value"));
            if (e.gamma.dim() != d || e.delta.dim() != d)
                throw MalformedGermError("blocks_from_json: index dimension mismatch");
            entries.push_back(std::move(e));
        }
        set_block(m, n, std::move(entries));
    }
}

inline BiSymTensor block_from_entries(int d, int m, int n, const std::vector<SymbolGerm::Entry>& entries) {
    BiSymTensor f(d, m, n);
    for (const auto& e : entries) {
        if (e.gamma.degree() != m || e.delta.degree() != n)
            throw MalformedGermError("block entries are not homogeneous of the declared bidegree");
        f(f.out_set().rank(e.gamma), f.in_set().rank(e.delta)) = e.value;
    }
    return f;
}

} // namespace detail

inline std::string kernel_to_json(const OperatorKernel& B) {
    std::string s = "{\n";
    s += "  \"d\": " + std::to_string(B.dim()) + ",\n";
    s += "  \"N\": " + std::to_string(B.max_in_degree()) + ",\n";
    s += "  \"weights\": [";
    const auto& w = B.sys_in()->scale().lambda;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += ", ";
        s += fmt(w[i]);
    }
    s += "],\n";
    s += "  \"measures\": {\n";
    s += "    \"in\": " + measure_to_json(B.sys_in()->measure()) + ",\n";
    s += "    \"out\": " + measure_to_json(B.sys_out()->measure()) + "\n";
    s += "  },\n";
    s += "  \"blocks\": " +
         detail::blocks_to_json(B.max_out_degree(), B.max_in_degree(),
                                [&](int m, int n) { return B.block(m, n); }, "  ") +
         "\n";
    s += "}\n";
    return s;
}

inline OperatorKernel kernel_from_json(const nlohmann::json& j) {
    const int d = j.at("d").get<int>();
    const int N = j.at("N").get<int>();
    HilbertScale scale = j.contains("weights") ? HilbertScale(j.at("weights").get<std::vector<double>>())
                                               : HilbertScale::standard(d);
    const auto& mj = j.at("measures");
    auto sys_in = AppellSystem::build(measure_from_json(mj.at("in")), N, scale);
    auto sys_out = AppellSystem::build(measure_from_json(mj.at("out")), N, scale);
    OperatorKernel B(sys_in, sys_out);
    detail::blocks_from_json(j, d, [&](int m, int n, std::vector<SymbolGerm::Entry> entries) {
        if (m > N || n > N) throw MalformedGermError("kernel_from_json: block degree exceeds N");
        B.set_block(m, n, detail::block_from_entries(d, m, n, entries));
    });
    return B;
}

inline std::string germ_to_json(const SymbolGerm& g) {
    std::string s = "{\n";
    s += "  \"d\": " + std::to_string(g.dim()) + ",\n";
    s += "  \"max_degree\": " + std::to_string(g.max_degree()) + ",\n";
    s += "  \"domain\": {\"p\": " + std::to_string(g.domain().p) + ", \"q\": " + std::to_string(g.domain().q) +
         ", \"delta\": " + fmt(g.domain().delta) + "},\n";
    s += "  \"blocks\": " +
         detail::blocks_to_json(g.max_degree(), g.max_degree(), [&](int m, int n) { return g.block(m, n); },
                                "  ") +
         "\n";
    s += "}\n";
    return s;
}

inline SymbolGerm germ_from_json(const nlohmann::json& j) {
    const int d = j.at("d").get<int>();
    const int M = j.at("max_degree").get<int>();
    SymbolDomain dom;
    if (j.contains("domain")) {
        dom.p = j.at("domain").value("p", 0);
        dom.q = j.at("domain").value("q", 0);
        dom.delta = j.at("domain").value("delta", 0.5);
    }
    SymbolGerm g(d, M, dom);
    detail::blocks_from_json(j, d, [&](int m, int n, std::vector<SymbolGerm::Entry> entries) {
        if (m > M || n > M) throw MalformedGermError("germ_from_json: block degree exceeds max_degree");
        g.set_block(m, n, detail::block_from_entries(d, m, n, entries));
    });
    return g;
}

namespace detail {

inline std::string family_to_json(const SystemPtr& sys, const std::vector<SymTensor>& coeffs,
                                  const char* basis) {
    std::string s = "{\n";
    s += "  \"d\": " + std::to_string(sys->dim()) + ",\n";
    s += "  \"N\": " + std::to_string(sys->max_degree()) + ",\n";
    s += "  \"basis\": \"" + std::string(basis) + "\",\n";
    s += "  \"weights\": [";
    for (size_t i = 0; i < sys->scale().lambda.size(); ++i) {
        if (i) s += ", ";
        s += fmt(sys->scale().lambda[i]);
    }
    s += "],\n";
    s += "  \"measure\": " + measure_to_json(sys->measure()) + ",\n";
    s += "  \"coefficients\": [";
    bool first = true;
    for (int n = 0; n < static_cast<int>(coeffs.size()); ++n) {
        const SymTensor& t = coeffs[static_cast<size_t>(n)];
        for (int r = 0; r < t.set().size(); ++r) {
            if (t[r] == Complex(0.0)) continue;
            if (!first) s += ",";
            first = false;
            s += "\n    {\"n\": " + std::to_string(n) + ", \"gamma\": " + fmt(t.set()[r]) +
                 ", \"value\": " + fmt(t[r]) + "}";
        }
    }
    s += first ? "]\n" : "\n  ]\n";
    s += "}\n";
    return s;
}

template <typename Family>
Family family_from_json(const nlohmann::json& j, const char* basis) {
    const std::string b = j.at("basis").get<std::string>();
    if (b != basis)
        throw Error(std::string("coefficient family: expected basis '") + basis + "', found '" + b + "'");
    const int d = j.at("d").get<int>();
    const int N = j.at("N").get<int>();
    HilbertScale scale = j.contains("weights") ? HilbertScale(j.at("weights").get<std::vector<double>>())
                                               : HilbertScale::standard(d);
    auto sys = AppellSystem::build(measure_from_json(j.at("measure")), N, std::move(scale));
    Family out(sys);
    for (const auto& cj : j.at("coefficients")) {
        const int n = cj.at("n").get<int>();
        const MultiIndex gamma(cj.at("gamma").get<std::vector<int>>());
        if (n < 0 || n > N || gamma.dim() != d || gamma.degree() != n)
            throw Error("coefficient family: entry index out of range");
        out[n][out[n].set().rank(gamma)] = complex_from_json(cj.at("value"));
    }
    return out;
}

} // namespace detail

inline std::string chaos_vector_to_json(const ChaosVector& v) {
    return detail::family_to_json(v.sys, v.coeffs, "P");
}

inline std::string chaos_functional_to_json(const ChaosFunctional& f) {
    return detail::family_to_json(f.sys, f.coeffs, "Q");
}

inline ChaosVector chaos_vector_from_json(const nlohmann::json& j) {
    return detail::family_from_json<ChaosVector>(j, "P");
}

inline ChaosFunctional chaos_functional_from_json(const nlohmann::json& j) {
    return detail::family_from_json<ChaosFunctional>(j, "Q");
}

inline std::string germ_function_to_json(const GermFunction& g) {
    std::string s = "{\n";
    s += "  \"d\": " + std::to_string(g.series.dim()) + ",\n";
    s += "  \"N\": " + std::to_string(g.series.max_degree()) + ",\n";
    s += "  \"domain\": {\"p\": " + std::to_string(g.domain.p) + ", \"q\": " + std::to_string(g.domain.q) +
         ", \"bound\": \"" +
         (g.domain.bound == LocalityBound::TwoPowNegQ ? "2^-q" : "2^-q-1") + "\"},\n";
    s += "  \"coefficients\": [";
    bool first = true;
    for (int f = 0; f < g.series.layout().size(); ++f) {
        if (g.series[f] == Complex(0.0)) continue;
        if (!first) s += ",";
        first = false;
        s += "\n    {\"alpha\": " + fmt(g.series.layout().at(f)) + ", \"value\": " + fmt(g.series[f]) + "}";
    }
    s += first ? "]\n" : "\n  ]\n";
    s += "}\n";
    return s;
}

inline GermFunction germ_function_from_json(const nlohmann::json& j) {
    const int d = j.at("d").get<int>();
    const int N = j.at("N").get<int>();
    LocalityView view;
    if (j.contains("domain")) {
        view.p = j.at("domain").value("p", 0);
        view.q = j.at("domain").value("q", 0);
        const std::string b = j.at("domain").value("bound", "2^-q");
        if (b == "2^-q")
            view.bound = LocalityBound::TwoPowNegQ;
        else if (b == "2^-q-1")
            view.bound = LocalityBound::TwoPowNegQMinus1;
        else
            throw Error("germ_function_from_json: unknown bound kind '" + b + "'");
    }
    PowerSeries series(d, N);
    for (const auto& cj : j.at("coefficients")) {
        const MultiIndex alpha(cj.at("alpha").get<std::vector<int>>());
        if (alpha.dim() != d || alpha.degree() > N)
            throw Error("germ_function_from_json: coefficient index out of range");
        series.at(alpha) = complex_from_json(cj.at("value"));
    }
    return GermFunction(std::move(series), view);
}

/// Parse a JSON document, converting parser failures into library errors.
inline nlohmann::json parse(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("json parse error: ") + e.what());
    }
}

} // namespace appell::jsonio
