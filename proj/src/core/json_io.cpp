#include "sclp/core/json_io.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sclp::core {

using nlohmann::json;

namespace {

Vector vector_from_json(const json& j) {
    Vector v(j.size());
    Index i = 0;
    for (const auto& e : j) v[i++] = e.get<double>();
    return v;
}

Matrix matrix_from_json(const json& j, Index rows, Index cols) {
    Matrix m(rows, cols);
    if (static_cast<Index>(j.size()) != rows)
        throw std::runtime_error("matrix row count mismatch");
    for (Index r = 0; r < rows; ++r) {
        const auto& row = j.at(r);
        if (static_cast<Index>(row.size()) != cols)
            throw std::runtime_error("matrix column count mismatch");
        for (Index c = 0; c < cols; ++c) m(r, c) = row.at(c).get<double>();
    }
    return m;
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json matrix_to_json(const Matrix& m) {
    json out = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

}  // namespace

SclpProblem problem_from_json(const json& j) {
    SclpProblem p;
    const Index K = j.at("K").get<Index>();
    const Index I = j.at("I").get<Index>();
    const Index J = j.at("J").get<Index>();
    const Index L = j.value("L", Index{0});

    p.G = matrix_from_json(j.at("G"), K, J);
    p.H = matrix_from_json(j.at("H"), I, J);
    p.F = (L > 0) ? matrix_from_json(j.at("F"), K, L) : Matrix(K, 0);
    p.a = vector_from_json(j.at("a"));
    p.b = vector_from_json(j.at("b"));
    p.c = vector_from_json(j.at("c"));
    p.d = (L > 0 && j.contains("d")) ? vector_from_json(j.at("d")) : Vector(0);
    p.alpha = vector_from_json(j.at("alpha"));
    p.gamma = vector_from_json(j.at("gamma"));
    p.T = j.at("T").get<double>();

    if (j.contains("h") && j.contains("g")) {
        AppliedCosts ac;
        ac.h = vector_from_json(j.at("h"));
        ac.g = vector_from_json(j.at("g"));
        ac.objective_constant = applied_objective_constant(ac.h, p.alpha, p.a, p.T);
        p.applied = std::move(ac);
    }
    return p;
}

json problem_to_json(const SclpProblem& p) {
    json j;
    j["K"] = p.K();
    j["I"] = p.I();
    j["J"] = p.J();
    j["L"] = p.L();
    j["G"] = matrix_to_json(p.G);
    j["H"] = matrix_to_json(p.H);
    j["F"] = matrix_to_json(p.F);
    j["a"] = vector_to_json(p.a);
    j["b"] = vector_to_json(p.b);
    j["c"] = vector_to_json(p.c);
    j["d"] = vector_to_json(p.d);
    j["alpha"] = vector_to_json(p.alpha);
    j["gamma"] = vector_to_json(p.gamma);
    j["T"] = p.T;
    if (p.applied) {
        j["h"] = vector_to_json(p.applied->h);
        j["g"] = vector_to_json(p.applied->g);
    }
    return j;
}

SclpProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem file: " + path);
    json j;
    in >> j;
    return problem_from_json(j);
}

void save_problem(const SclpProblem& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write problem file: " + path);
    out << problem_to_json(p).dump(2) << "\n";
}

json solution_to_json(const SclpProblem& p, const SolutionState& s) {
    json j;
    j["horizon"] = s.horizon;
    j["theta"] = s.theta;
    j["breakpoints"] = s.breakpoints();
    j["tau"] = vector_to_json(s.tau);
    j["x0"] = vector_to_json(s.x0);
    j["qN"] = vector_to_json(s.qN);

    auto dump_intervals = [&](const std::vector<Vector>& vs) {
        json out = json::array();
        for (const auto& v : vs) out.push_back(vector_to_json(v));
        return out;
    };
    j["u"] = dump_intervals(s.u);
    j["xdot"] = dump_intervals(s.xdot);
    j["p"] = dump_intervals(s.p);
    j["qdot"] = dump_intervals(s.qdot);
    j["x"] = dump_intervals(s.x);
    j["q"] = dump_intervals(s.q);

    j["objective_primal"] = evaluate_primal_objective(p, s);
    j["objective_dual"] = evaluate_dual_objective(p, s);
    if (p.applied) {
        j["objective_holding"] =
            p.applied->objective_constant - evaluate_primal_objective(p, s);
    }
    return j;
}

}  // namespace sclp::core
