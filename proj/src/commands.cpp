#include "conefock/commands.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace conefock {

namespace {

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
    throw ConfigError("config error at " + path + ": " + what);
}

const Json& require(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) config_fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) config_fail(path + "/" + key, "missing required field");
    return *it;
}

const Json* optional(const Json& j, const std::string& key) {
    if (!j.is_object()) return nullptr;
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

long long as_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) config_fail(path, "expected an integer");
    return j.get<long long>();
}

double as_number(const Json& j, const std::string& path) {
    if (!j.is_number()) config_fail(path, "expected a number");
    return j.get<double>();
}

std::string as_string(const Json& j, const std::string& path) {
    if (!j.is_string()) config_fail(path, "expected a string");
    return j.get<std::string>();
}

bool as_bool(const Json& j, const std::string& path) {
    if (!j.is_boolean()) config_fail(path, "expected a boolean");
    return j.get<bool>();
}

IVec as_ivec(const Json& j, const std::string& path) {
    if (!j.is_array()) config_fail(path, "expected an array of integers");
    IVec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) =
            static_cast<int>(as_int(j[i], path + "/" + std::to_string(i)));
    return v;
}

std::vector<IVec> as_ivec_list(const Json& j, const std::string& path) {
    if (!j.is_array()) config_fail(path, "expected an array of integer arrays");
    std::vector<IVec> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_ivec(j[i], path + "/" + std::to_string(i)));
    return out;
}

int as_positive_int(const Json& j, const std::string& path) {
    const long long v = as_int(j, path);
    if (v < 1) config_fail(path, "expected a positive integer");
    return static_cast<int>(v);
}

long long get_int_or(const Json& j, const std::string& key, const std::string& path,
                     long long fallback) {
    const Json* v = optional(j, key);
    return v ? as_int(*v, path + "/" + key) : fallback;
}

Window as_window(const Json& j, const std::string& path) {
    Window w;
    w.lower = as_ivec(require(j, "lower", path), path + "/lower");
    w.upper = as_ivec(require(j, "upper", path), path + "/upper");
    try {
        w.validate();
    } catch (const std::invalid_argument& e) {
        config_fail(path, e.what());
    }
    return w;
}

ConeSpec as_cone(const Json& j, const std::string& path) {
    ConeSpec c;
    c.dim = as_positive_int(require(j, "dim", path), path + "/dim");
    const Json& gens = require(j, "generators", path);
    if (!gens.is_array() || gens.size() != static_cast<std::size_t>(c.dim))
        config_fail(path + "/generators", "expected " + std::to_string(c.dim) +
                                              " generator columns");
    c.generators.resize(c.dim, c.dim);
    for (std::size_t col = 0; col < gens.size(); ++col) {
        const IVec g = as_ivec(gens[col], path + "/generators/" + std::to_string(col));
        if (g.size() != c.dim)
            config_fail(path + "/generators/" + std::to_string(col),
                        "expected " + std::to_string(c.dim) + " entries");
        c.generators.col(static_cast<Eigen::Index>(col)) = g;
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        config_fail(path, e.what());
    }
    return c;
}

IsometricRep as_rep(const Json& j, const std::string& path) {
    const std::string kind = as_string(require(j, "kind", path), path + "/kind");
    if (kind == "direct_sum") {
        const Json& mults = require(j, "multiplicities", path);
        if (!mults.is_array() || mults.empty())
            config_fail(path + "/multiplicities", "expected a nonempty array");
        std::vector<int> m;
        for (std::size_t i = 0; i < mults.size(); ++i)
            m.push_back(as_positive_int(mults[i],
                                        path + "/multiplicities/" + std::to_string(i)));
        return IsometricRep::direct_sum(std::move(m));
    }
    if (kind == "lattice_shift") {
        ConeSpec cone = as_cone(require(j, "cone", path), path + "/cone");
        const int multiplicity = static_cast<int>(get_int_or(j, "multiplicity", path, 1));
        if (multiplicity < 1) config_fail(path + "/multiplicity", "expected >= 1");
        const Json& mod = require(j, "module", path);
        const std::string mod_path = path + "/module";
        LatticeModule module;
        if (const Json* hs = optional(mod, "halfspaces")) {
            if (!hs->is_array()) config_fail(mod_path + "/halfspaces", "expected an array");
            std::vector<HalfSpace> list;
            for (std::size_t i = 0; i < hs->size(); ++i) {
                const std::string hp = mod_path + "/halfspaces/" + std::to_string(i);
                HalfSpace h;
                h.normal = as_ivec(require((*hs)[i], "normal", hp), hp + "/normal");
                h.offset = get_int_or((*hs)[i], "offset", hp, 0);
                list.push_back(std::move(h));
            }
            try {
                module = LatticeModule::from_halfspaces(std::move(cone), std::move(list));
            } catch (const std::invalid_argument& e) {
                config_fail(mod_path, e.what());
            }
        } else if (const Json* pts = optional(mod, "points")) {
            const Window declared = as_window(require(mod, "declared_window", mod_path),
                                              mod_path + "/declared_window");
            try {
                module = LatticeModule::from_points(std::move(cone),
                                                    as_ivec_list(*pts, mod_path + "/points"),
                                                    declared);
            } catch (const std::invalid_argument& e) {
                config_fail(mod_path, e.what());
            }
        } else {
            config_fail(mod_path, "expected either halfspaces or points");
        }
        return IsometricRep::lattice_shift(std::move(module), multiplicity);
    }
    config_fail(path + "/kind", "expected \"lattice_shift\" or \"direct_sum\"");
}

Json json_ivec(const IVec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Json json_window(const Window& w) {
    return Json{{"lower", json_ivec(w.lower)}, {"upper", json_ivec(w.upper)}};
}

Json json_mode(const Mode& m) {
    Json a = Json::array();
    for (int c : m.point) a.push_back(c);
    return Json{{"point", a}, {"channel", m.channel}};
}

Json json_sparse(const SparseVec& f) {
    Json out = Json::array();
    for (const auto& [m, c] : f) {
        Json e = json_mode(m);
        e["re"] = c.real();
        e["im"] = c.imag();
        out.push_back(std::move(e));
    }
    return out;
}

// Deviation records carry their tolerance and exactness flag; no bare floats.
Json upper_bound_check(const std::string& name, double value, double tolerance, bool exact) {
    return Json{{"name", name},
                {"value", value},
                {"tolerance", tolerance},
                {"comparison", "<="},
                {"exact", exact},
                {"pass", value <= tolerance}};
}

Json lower_bound_check(const std::string& name, double value, double threshold, bool exact) {
    return Json{{"name", name},
                {"value", value},
                {"tolerance", threshold},
                {"comparison", ">="},
                {"exact", exact},
                {"pass", value >= threshold}};
}

Json equality_check(const std::string& name, const Json& actual, const Json& expected) {
    return Json{{"name", name},
                {"value", actual},
                {"expected", expected},
                {"comparison", "=="},
                {"exact", true},
                {"pass", actual == expected}};
}

struct ReportBuilder {
    Json report;
    bool all_pass = true;

    ReportBuilder(const std::string& command, const ParsedConfig& pc) {
        report["schema_version"] = 1;
        report["command"] = command;
        report["seed"] = pc.seed;
        report["config"] = pc.raw;
        report["checks"] = Json::array();
    }
    void add(Json check) {
        all_pass = all_pass && check.at("pass").get<bool>();
        report["checks"].push_back(std::move(check));
    }
    CommandOutcome finish(Json summary = Json::object()) {
        summary["pass"] = all_pass;
        report["summary"] = std::move(summary);
        return CommandOutcome{std::move(report), all_pass ? kExitPass : kExitCheckFailure};
    }
};

CVector random_direction(DeterministicRng& rng, Eigen::Index dim, double max_norm) {
    CVector u = rng.complex_vector(dim);
    const double n = u.norm();
    if (n == 0.0) return u;
    return u * (max_norm * rng.uniform() / n);
}

}  // namespace

ParsedConfig parse_config(const Json& config) {
    if (!config.is_object()) config_fail("/", "expected a JSON object");
    ParsedConfig pc;
    pc.raw = config;
    const Json& seed = require(config, "seed", "/");
    if (!seed.is_number_unsigned() && !seed.is_number_integer())
        config_fail("/seed", "expected a 64-bit integer");
    pc.seed = seed.get<std::uint64_t>();

    if (const Json* f = optional(config, "flavor")) {
        const std::string s = as_string(*f, "/flavor");
        if (s == "ccr")
            pc.flavor = Flavor::ccr;
        else if (s == "car")
            pc.flavor = Flavor::car;
        else
            config_fail("/flavor", "expected \"ccr\" or \"car\"");
    }
    pc.cutoff = static_cast<int>(get_int_or(config, "cutoff", "", 2));
    if (pc.cutoff < 0) config_fail("/cutoff", "expected >= 0");
    pc.budget = static_cast<int>(get_int_or(config, "budget", "", 1));
    if (pc.budget < 0) config_fail("/budget", "expected >= 0");

    if (const Json* w = optional(config, "window")) {
        pc.window = as_window(*w, "/window");
        pc.has_window = true;
    }
    if (const Json* r = optional(config, "rep")) {
        pc.rep = as_rep(*r, "/rep");
        pc.has_rep = true;
        if (pc.has_window && pc.window.lower.size() != pc.rep.dim())
            config_fail("/window", "dimension differs from the representation");
        if (pc.rep.is_lattice_shift() && pc.has_window) {
            const auto mc = module_check(pc.rep.as_lattice_shift().module, pc.window);
            if (!mc.ok) {
                std::ostringstream msg;
                msg << "module property A + P subset A violated at point (";
                for (Eigen::Index i = 0; i < mc.violation->first.size(); ++i)
                    msg << (i ? "," : "") << mc.violation->first(i);
                msg << ")";
                config_fail("/rep/module", msg.str());
            }
        }
    }
    if (const Json* t = optional(config, "tolerances")) {
        const auto grab = [&](const char* key, double& slot) {
            if (const Json* v = optional(*t, key))
                slot = as_number(*v, std::string("/tolerances/") + key);
        };
        grab("rank_threshold", pc.tol.rank_threshold);
        grab("orthonormality", pc.tol.orthonormality);
        grab("intersect_gap", pc.tol.intersect_gap);
        grab("containment", pc.tol.containment);
        grab("isometry", pc.tol.isometry);
        grab("tol_zero", pc.tol.tol_zero);
        grab("tol_pos", pc.tol.tol_pos);
    }
    return pc;
}

CommandOutcome cmd_verify_relations(const Json& config) {
    const ParsedConfig pc = parse_config(config);
    DeterministicRng rng(pc.seed);
    ReportBuilder rb("verify-relations", pc);

    // Weyl relation at the exponential-vector kernel level, truncation-free.
    {
        const int trials = static_cast<int>(get_int_or(config, "kernel_trials", "", 100));
        const int dim = static_cast<int>(get_int_or(config, "kernel_dim", "", 6));
        if (dim < 1 || dim > 8) config_fail("/kernel_dim", "expected 1..8");
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const CVector u = random_direction(rng, dim, 1.0);
            const CVector v = random_direction(rng, dim, 1.0);
            const CVector a = rng.complex_vector(dim);
            const CVector b = rng.complex_vector(dim);
            const Complex phase = std::exp(Complex(0.0, -u.dot(v).imag()));
            const Complex lhs = weyl_kernel_eval2(u, v, a, b);
            const Complex rhs = phase * weyl_kernel_eval(u + v, a, b);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-300, std::abs(rhs)));
        }
        rb.add(upper_bound_check("weyl_relation_kernel_level", worst, 1e-12, false));
    }

    // Weyl relation on truncated matrices.
    {
        const int m = static_cast<int>(get_int_or(config, "matrix_modes", "", 2));
        const int n = static_cast<int>(get_int_or(config, "matrix_cutoff", "", 12));
        const int trials = static_cast<int>(get_int_or(config, "matrix_trials", "", 3));
        if (m < 1 || m > 3) config_fail("/matrix_modes", "expected 1..3");
        const FockModel fock = FockModel::symmetric(m, n);
        const int observed = n / 3;  // truncation is only faithful away from the edge
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const CVector u = random_direction(rng, m, 0.5);
            const CVector v = random_direction(rng, m, 0.5);
            const Complex phase = std::exp(Complex(0.0, -u.dot(v).imag()));
            const CMatrix lhs = weyl_operator(fock, u) * weyl_operator(fock, v);
            const CMatrix rhs = phase * weyl_operator(fock, CVector(u + v));
            worst = std::max(worst, sector_compressed_norm(fock, lhs - rhs, observed));
        }
        Json check = upper_bound_check("weyl_relation_matrix_level", worst, 1e-6, false);
        check["observed_sector"] = observed;
        rb.add(std::move(check));
    }

    // CAR anticommutation relations, exact at the full fermionic cutoff.
    {
        const int m = static_cast<int>(get_int_or(config, "car_modes", "", 4));
        if (m < 1 || m > 6) config_fail("/car_modes", "expected 1..6");
        const FockModel fock = FockModel::antisymmetric(m, m);
        const CMatrix id = CMatrix::Identity(fock.dim(), fock.dim());
        double mixed = 0.0, same = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                CVector ei = CVector::Zero(m), ej = CVector::Zero(m);
                ei(i) = 1.0;
                ej(j) = 1.0;
                const CMatrix ai = annihilation(fock, ei);
                const CMatrix cj = creation(fock, ej);
                const CMatrix aj = annihilation(fock, ej);
                mixed = std::max(mixed,
                                 op_norm(ai * cj + cj * ai - (i == j ? id : CMatrix(0.0 * id))));
                same = std::max(same, op_norm(ai * aj + aj * ai));
            }
        rb.add(upper_bound_check("car_mixed_anticommutator", mixed, 1e-12, true));
        rb.add(upper_bound_check("car_same_type_anticommutator", same, 1e-13, true));
    }
    return rb.finish();
}

namespace {

Json divisibility_record(const IsometricRep& rep, const std::vector<AdditiveCocycle>& basis,
                         const IVec& z, const Window* w, const Tolerances& tol) {
    const DivisibilityReport rep_z = divisibility_check(rep, basis, z, w, tol);
    Json rec = equality_check("divisible_at_z", rep_z.divisible, true);
    rec["z"] = json_ivec(z);
    rec["span_rank"] = rep_z.span_rank;
    rec["kernel_dim"] = rep_z.kernel_dim;
    rec["dropped_support"] = rep_z.dropped_support;
    return rec;
}

}  // namespace

CommandOutcome cmd_cocycles(const Json& config) {
    const ParsedConfig pc = parse_config(config);
    if (!pc.has_rep) config_fail("/rep", "missing required field");
    ReportBuilder rb("cocycles", pc);

    const Window* w = pc.has_window ? &pc.window : nullptr;
    const CocycleSolveResult solved = solve_cocycles(pc.rep, w, pc.tol);

    Json basis_json = Json::array();
    double worst = 0.0;
    for (const AdditiveCocycle& c : solved.basis) {
        worst = std::max(worst, cocycle_compatibility_residual(pc.rep, c));
        Json gens = Json::array();
        for (const SparseVec& h : c.generator_values) gens.push_back(json_sparse(h));
        basis_json.push_back(std::move(gens));
    }
    rb.add(upper_bound_check("cocycle_compatibility_residual", worst, pc.tol.tol_zero,
                             solved.exact));
    if (const Json* expected = optional(config, "expected_dimension"))
        rb.add(equality_check("cocycle_space_dimension",
                              static_cast<long long>(solved.basis.size()),
                              as_int(*expected, "/expected_dimension")));
    if (const Json* zl = optional(config, "z_list"))
        for (const IVec& z : as_ivec_list(*zl, "/z_list"))
            rb.add(divisibility_record(pc.rep, solved.basis, z, w, pc.tol));

    Json summary;
    summary["dimension"] = solved.basis.size();
    summary["exact"] = solved.exact;
    summary["vacuous"] = solved.basis.empty();
    summary["basis"] = std::move(basis_json);
    return rb.finish(std::move(summary));
}

CommandOutcome cmd_divisibility(const Json& config) {
    const ParsedConfig pc = parse_config(config);
    if (!pc.has_rep) config_fail("/rep", "missing required field");
    ReportBuilder rb("divisibility", pc);

    const Window* w = pc.has_window ? &pc.window : nullptr;
    const CocycleSolveResult solved = solve_cocycles(pc.rep, w, pc.tol);
    const Json& zl = require(config, "z_list", "/");
    const auto zs = as_ivec_list(zl, "/z_list");
    if (zs.empty()) config_fail("/z_list", "expected at least one point");
    for (const IVec& z : zs) rb.add(divisibility_record(pc.rep, solved.basis, z, w, pc.tol));

    Json summary;
    summary["cocycle_dimension"] = solved.basis.size();
    summary["exact"] = solved.exact;
    return rb.finish(std::move(summary));
}

CommandOutcome cmd_decomposables(const Json& config) {
    const ParsedConfig pc = parse_config(config);
    ReportBuilder rb("decomposables", pc);
    Json summary;

    if (pc.has_rep) {
        if (!pc.has_window) config_fail("/window", "missing required field");
        const IVec x = as_ivec(require(config, "x", "/"), "/x");
        const FlowModel model = FlowModel::make(pc.rep, pc.flavor, pc.window, pc.cutoff);
        std::vector<IVec> subdivision;
        const bool explicit_y = optional(config, "subdivision") != nullptr;
        if (explicit_y) subdivision = as_ivec_list(*optional(config, "subdivision"), "/subdivision");
        const DecomposableSpace ds =
            decomposable_space(model, x, explicit_y ? &subdivision : nullptr, pc.tol);

        Json dims = Json::array();
        for (Eigen::Index d : ds.sector_dims) dims.push_back(d);
        summary["sector_dims"] = dims;
        summary["vacuous"] = ds.vacuous;
        summary["subdivision_size"] = ds.subdivision.size();
        if (const Json* expected = optional(config, "expected_sector_dims"))
            rb.add(equality_check("sector_dims", dims, *expected));
        else
            rb.add(equality_check("sector_dims_reported", dims, dims));
    }

    if (const Json* refinement = optional(config, "refinement")) {
        if (!refinement->is_array()) config_fail("/refinement", "expected an array");
        Json table = Json::array();
        for (std::size_t i = 0; i < refinement->size(); ++i) {
            const int m = as_positive_int((*refinement)[i],
                                          "/refinement/" + std::to_string(i));
            const IsometricRep rep = IsometricRep::direct_sum({1});
            Window w;
            w.lower = IVec::Zero(1);
            w.upper = IVec::Constant(1, m);
            const FlowModel model = FlowModel::make(rep, Flavor::ccr, w, 2);
            const DecomposableSpace ds =
                decomposable_space(model, IVec::Constant(1, m), nullptr, pc.tol);
            const long long full2 = static_cast<long long>(m) * (m + 1) / 2;
            const long long dim2 = ds.sector_dims[2];
            // dim2 / full2 == 2 / (m + 1), checked as an integer identity.
            Json rec = equality_check("refinement_ratio_m" + std::to_string(m),
                                      dim2 * (m + 1), 2 * full2);
            rec["sector2_dim"] = dim2;
            rec["sector2_full"] = full2;
            rb.add(rec);
            table.push_back(Json{{"m", m},
                                 {"sector2_dim", dim2},
                                 {"sector2_full", full2},
                                 {"ratio_num", 2},
                                 {"ratio_den", m + 1}});
        }
        summary["refinement_table"] = std::move(table);
    }
    if (!pc.has_rep && !optional(config, "refinement"))
        config_fail("/", "expected a rep with x, a refinement list, or both");
    return rb.finish(std::move(summary));
}

CommandOutcome cmd_proper_search(const Json& config) {
    const ParsedConfig pc = parse_config(config);
    if (!pc.has_rep) config_fail("/rep", "missing required field");
    if (!pc.has_window) config_fail("/window", "missing required field");
    ReportBuilder rb("proper-search", pc);

    Json pairs = Json::array();
    std::size_t found = 0;
    if (pc.rep.is_lattice_shift()) {
        const auto certs =
            proper_search(pc.rep.as_lattice_shift().module, pc.budget, pc.window);
        for (const auto& cert : certs) {
            // Subspace-level recomputation; disagreement throws CrossCheckError.
            const auto ps = properness_subspaces(pc.rep, cert.x, cert.y, pc.window, pc.tol);
            if (!ps.proper)
                throw CrossCheckError(
                    "proper-search: set-level certificate fails the subspace-level check");
            pairs.push_back(Json{{"x", json_ivec(cert.x)},
                                 {"y", json_ivec(cert.y)},
                                 {"t1_witness", json_ivec(cert.t1_witness)},
                                 {"t2_witness", json_ivec(cert.t2_witness)},
                                 {"dim_u1", ps.u1.rank()},
                                 {"dim_u2", ps.u2.rank()},
                                 {"dim_core", ps.core.rank()}});
        }
        found = certs.size();
    } else {
        const int d = pc.rep.dim();
        std::vector<IVec> coeffs;
        IVec c = IVec::Zero(d);
        while (true) {
            if (!c.isZero()) coeffs.push_back(c);
            Eigen::Index i = d;
            bool done = true;
            while (i > 0) {
                --i;
                if (c(i) < pc.budget) {
                    ++c(i);
                    for (Eigen::Index j = i + 1; j < d; ++j) c(j) = 0;
                    done = false;
                    break;
                }
            }
            if (done) break;
        }
        for (const IVec& nx : coeffs)
            for (const IVec& ny : coeffs) {
                const IVec x = pc.rep.cone().generators * nx;
                const IVec y = pc.rep.cone().generators * ny;
                const auto ps = properness_subspaces(pc.rep, x, y, pc.window, pc.tol);
                if (!ps.proper) continue;
                ++found;
                pairs.push_back(Json{{"x", json_ivec(x)},
                                     {"y", json_ivec(y)},
                                     {"dim_u1", ps.u1.rank()},
                                     {"dim_u2", ps.u2.rank()},
                                     {"dim_core", ps.core.rank()}});
            }
    }

    if (const Json* expect = optional(config, "expect_nonempty"))
        rb.add(equality_check("proper_pairs_nonempty", found > 0,
                              as_bool(*expect, "/expect_nonempty")));
    Json summary;
    summary["found"] = found;
    summary["pairs"] = std::move(pairs);
    return rb.finish(std::move(summary));
}

CommandOutcome cmd_witness(const Json& config) {
    const ParsedConfig pc = parse_config(config);
    if (!pc.has_rep) config_fail("/rep", "missing required field");
    if (!pc.has_window) config_fail("/window", "missing required field");
    const int bosonic_cutoff =
        static_cast<int>(get_int_or(config, "bosonic_cutoff", "", 12));
    if (bosonic_cutoff < 1) config_fail("/bosonic_cutoff", "expected >= 1");
    ReportBuilder rb("witness", pc);

    const WitnessReport wr =
        nonconjugacy_witness(pc.rep, pc.budget, pc.window, bosonic_cutoff, pc.tol);

    Json summary;
    summary["verdict"] = wr.verdict;
    summary["found_pair"] = wr.found_pair;
    if (!wr.reason.empty()) summary["reason"] = wr.reason;
    if (wr.found_pair) {
        rb.add(upper_bound_check("ccr_max_commutator", wr.ccr_max_commutator, pc.tol.tol_zero,
                                 true));
        rb.add(upper_bound_check("ccr_matrix_commutator_corroboration",
                                 wr.ccr_matrix_commutator, 1e-6, false));
        rb.add(lower_bound_check("car_min_commutator", wr.car_min_commutator, pc.tol.tol_pos,
                                 true));
        rb.add(upper_bound_check("car_max_anticommutator", wr.car_max_anticommutator,
                                 pc.tol.tol_zero, true));
        summary["pair"] = Json{{"x", json_ivec(wr.x)}, {"y", json_ivec(wr.y)}};
        summary["dim_u1"] = wr.dim_u1;
        summary["dim_u2"] = wr.dim_u2;
        summary["dim_core"] = wr.dim_core;
        summary["ambient_mode_count"] = wr.ambient_mode_count;
        summary["marked_range"] = wr.marked_range;
        summary["marked_core"] = wr.marked_core;
        summary["range_parity_identity"] = wr.range_parity_identity;
        summary["fermionic_cutoff"] = wr.fermionic_cutoff;
        summary["bosonic_cutoff"] = wr.bosonic_cutoff;
    }
    if (const Json* expect = optional(config, "expect_verdict"))
        rb.add(equality_check("verdict", wr.verdict, as_string(*expect, "/expect_verdict")));
    else
        rb.add(equality_check("verdict", wr.verdict, std::string("distinguished")));
    return rb.finish(std::move(summary));
}

CommandOutcome run_command(const std::string& command, const Json& config) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    CommandOutcome out;
    try {
        if (command == "verify-relations")
            out = cmd_verify_relations(config);
        else if (command == "cocycles")
            out = cmd_cocycles(config);
        else if (command == "divisibility")
            out = cmd_divisibility(config);
        else if (command == "decomposables")
            out = cmd_decomposables(config);
        else if (command == "proper-search")
            out = cmd_proper_search(config);
        else if (command == "witness")
            out = cmd_witness(config);
        else
            throw ConfigError("config error at command: unknown subcommand \"" + command +
                              "\"");
    } catch (const ConfigError& e) {
        out.report = Json{{"schema_version", 1},
                          {"command", command},
                          {"error", Json{{"kind", "config"}, {"message", e.what()}}}};
        out.exit_code = kExitConfigError;
    } catch (const std::invalid_argument& e) {
        out.report = Json{{"schema_version", 1},
                          {"command", command},
                          {"error", Json{{"kind", "config"}, {"message", e.what()}}}};
        out.exit_code = kExitConfigError;
    } catch (const CrossCheckError& e) {
        out.report = Json{{"schema_version", 1},
                          {"command", command},
                          {"error", Json{{"kind", "cross_check"}, {"message", e.what()}}}};
        out.exit_code = kExitCrossCheck;
    } catch (const std::exception& e) {
        out.report = Json{{"schema_version", 1},
                          {"command", command},
                          {"error", Json{{"kind", "internal"}, {"message", e.what()}}}};
        out.exit_code = kExitCrossCheck;
    }
    const auto wall =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
    out.report["timing"] = Json{{"wall_ms", wall.count()}};
    return out;
}

Json report_without_timing(Json report) {
    report.erase("timing");
    return report;
}

}  // namespace conefock
