#include <omp.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "hdx/complex.hpp"
#include "hdx/errors.hpp"
#include "hdx/g2lab.hpp"
#include "hdx/matgroups.hpp"
#include "hdx/report.hpp"
#include "hdx/spectra.hpp"

using namespace hdx;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kResource = 3 };

struct Globals {
    int threads = 0;
    std::uint64_t seed = 12345;
    std::string report;  // JSON destination; stdout when empty
};

int emit(const Globals& g, const Json& j, const std::string& summary, bool pass) {
    if (g.report.empty()) {
        std::cout << dump(j);
    } else {
        std::ofstream out(g.report);
        if (!out) throw DomainError("cannot write " + g.report);
        out << dump(j);
        std::cout << summary << "\n";
    }
    return pass ? kOk : kFailed;
}

GeneratingSet pick_set(const RootSystem& phi, const std::string& sset) {
    if (sset == "special") return special_set(phi);
    if (sset == "alt") return b2_alternative_set(phi);
    throw DomainError("unknown generating set: " + sset);
}

Realization realization_for(Family fam, int rank) {
    if (fam == Family::A && rank >= 1 && rank <= 4) return Realization::sl(rank + 1);
    if ((fam == Family::B || fam == Family::C) && rank == 2) return Realization::sp4();
    throw DomainError("no matrix realization for " + std::string(1, family_char(fam)) + std::to_string(rank));
}

Json matrix_json(const GroupTable& g, const SmallMat& x) {
    const int n = g.ops().n();
    Json rows = Json::array();
    for (int i = 0; i < n; ++i) {
        Json r = Json::array();
        for (int j = 0; j < n; ++j) r.push_back(x.a[static_cast<std::size_t>(i * n + j)]);
        rows.push_back(r);
    }
    return rows;
}

// Case 2: A2 simple roots; Case 3: B2 simple roots.
struct CaseSpan {
    Realization re;
    std::vector<Root> psi;
    double bound2;  // bound on the squared-side eigenvalue
    int uncapped_m;
};

CaseSpan case_span(int which, int p) {
    if (which == 2) {
        auto re = Realization::sl(3);
        auto psi = std::vector<Root>{re.phi().simples()[0], re.phi().simples()[1]};
        return {re, psi, 1.0 / p, 3};
    }
    if (which == 3) {
        auto re = Realization::sp4();
        auto psi = std::vector<Root>{re.phi().simples()[0], re.phi().simples()[1]};
        return {re, psi, 2.0 / p, 4};
    }
    throw DomainError("spectra link handles cases 2 and 3");
}

// Numbering of the link-spectrum argument, by the full cone R.
std::string link_case(ConeKind k) {
    switch (k) {
        case ConeKind::Commuting: return "1";
        case ConeKind::Case1: return "2";
        case ConeKind::Case2: return "3";
        case ConeKind::Case3: return "G2-II";
        case ConeKind::Case4: return "G2-I";
    }
    return "?";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hdx: coset complexes of Chevalley groups and their spectra"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--threads", g.threads, "worker cap (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--report", g.report, "write the JSON report here instead of stdout");

    std::function<int()> action;

    // rootsys info
    auto* rootsys = app.add_subcommand("rootsys", "root systems");
    rootsys->require_subcommand(1);
    auto* rs_info = rootsys->add_subcommand("info", "roots, simple roots, generating set");
    std::string family, sset = "special";
    int rank = 0;
    rs_info->add_option("--family", family)->required();
    rs_info->add_option("--rank", rank)->required();
    rs_info->add_option("--sset", sset)->check(CLI::IsMember({"special", "alt"}));
    rs_info->callback([&] {
        action = [&] {
            auto phi = RootSystem::build(parse_family(family), rank);
            auto j = root_system_json(phi);
            Json set = Json::array();
            for (const auto& r : pick_set(phi, sset).members) set.push_back(r.coords());
            j["generating_set"] = {{"name", sset}, {"roots", set}};
            return emit(g, j, phi.label() + ": " + std::to_string(phi.size()) + " roots", true);
        };
    });

    // field make
    auto* field = app.add_subcommand("field", "finite fields");
    field->require_subcommand(1);
    auto* fmake = field->add_subcommand("make", "F_{p^m} with its modulus");
    int p = 0, m = 1;
    fmake->add_option("--p", p)->required();
    fmake->add_option("--m", m)->check(CLI::Range(1, kMaxExtension));
    fmake->callback([&] {
        action = [&] {
            Field f(p, m);
            return emit(g, field_json(f), "F_" + std::to_string(f.order()), true);
        };
    });

    // matgroup enumerate
    auto* matgroup = app.add_subcommand("matgroup", "matrix groups over F_p");
    matgroup->require_subcommand(1);
    auto* menum = matgroup->add_subcommand("enumerate", "BFS enumeration with table and manifest");
    std::string realization, table_out;
    menum->add_option("--realization", realization)->required();
    menum->add_option("--p", p)->required();
    menum->add_option("--out", table_out, "binary element table");
    menum->callback([&] {
        action = [&] {
            auto re = Realization::parse(realization);
            auto grp = GroupTable::enumerate(re, p);
            if (!table_out.empty()) save_group_table(grp, table_out);
            Json gens = Json::array();
            for (const auto& x : grp.generators()) gens.push_back(matrix_json(grp, x));
            const auto expected = group_order(re.phi(), p, 1);
            Json j = {{"realization", re.name()},
                      {"p", p},
                      {"order", grp.size()},
                      {"expected_order", expected},
                      {"generators", gens},
                      {"center", center_json(center(grp))}};
            if (!table_out.empty()) j["table"] = table_out;
            return emit(g, j, re.name() + "(F_" + std::to_string(p) + "): " + std::to_string(grp.size()) + " elements",
                        grp.size() == expected);
        };
    });

    // link analyze
    auto* link = app.add_subcommand("link", "rank-2 links");
    link->require_subcommand(1);
    auto* lan = link->add_subcommand("analyze", "link X_{a,b} with cosets of X_a and X_b");
    std::vector<int> pair;
    int ltype = -1;
    lan->add_option("--family", family)->required();
    lan->add_option("--rank", rank)->required();
    lan->add_option("--p", p)->required();
    lan->add_option("--m", m)->check(CLI::Range(1, kMaxExtension));
    lan->add_option("--sset", sset)->check(CLI::IsMember({"special", "alt"}));
    auto* type_opt = lan->add_option("--type", ltype, "vertex type of a rank-2 complex (uses S minus it)");
    lan->add_option("--pair", pair, "indices i j into S")->expected(2)->excludes(type_opt);
    lan->callback([&] {
        action = [&]() -> int {
            auto phi = RootSystem::build(parse_family(family), rank);
            auto s = pick_set(phi, sset);
            std::vector<Root> psi;
            if (ltype >= 0) {
                if (s.size() != 3) throw DomainError("--type needs rank 2; use --pair");
                if (ltype > 2) throw DomainError("type out of range");
                psi = s.without(static_cast<std::size_t>(ltype));
            } else if (pair.size() == 2) {
                for (int i : pair) {
                    if (i < 0 || static_cast<std::size_t>(i) >= s.size()) throw DomainError("pair index out of range");
                    psi.push_back(s.members[static_cast<std::size_t>(i)]);
                }
            } else {
                throw DomainError("give --type or --pair");
            }
            Field f(p, m);
            std::optional<Realization> re;
            try {
                re = realization_for(phi.family(), rank);
            } catch (const DomainError&) {
            }
            SpanGroup sg(phi, psi, f, re ? &*re : nullptr);
            auto lg = direct_link(sg);
            auto cone = positive_cone(phi, psi[0], psi[1]);
            Json j = link_json(lg);
            j["generation_cone"] = to_string(cone.kind);
            j["link_case"] = link_case(cone.kind);
            j["span"] = sg.span().label();
            j["field"] = field_json(f);
            auto wg = SparseWalkGraph::from_link(lg);
            j["connected"] = wg.connected();
            bool pass = wg.connected();
            if (wg.connected()) {
                auto rep = second_eigenvalue(wg, {1e-10, 5000, g.seed, false});
                j["spectrum"] = spectral_json(rep);
            }
            return emit(g, j, "link " + sg.span().label() + ": " + std::to_string(lg.left) + "+" + std::to_string(lg.right), pass);
        };
    });

    // complex build | verify
    auto* cx = app.add_subcommand("complex", "coset complexes at m = 1");
    cx->require_subcommand(1);
    auto* cbuild = cx->add_subcommand("build", "enumerate G and build K(G; H_t)");
    std::string cx_out, cx_in;
    bool adjoint = false;
    cbuild->add_option("--realization", realization)->required();
    cbuild->add_option("--p", p)->required();
    cbuild->add_option("--m", m)->check(CLI::Range(1, kMaxExtension));
    cbuild->add_option("--sset", sset)->check(CLI::IsMember({"special", "alt"}));
    cbuild->add_option("--out", cx_out);
    cbuild->add_flag("--adjoint", adjoint, "quotient by the centre");
    cbuild->callback([&] {
        action = [&] {
            if (m != 1) throw DomainError("complexes are built from the enumerated group at m = 1");
            auto re = Realization::parse(realization);
            auto grp = GroupTable::enumerate(re, p);
            auto k = build_complex(grp, pick_set(re.phi(), sset), sset);
            Json extra = Json::object();
            if (adjoint) {
                auto z = center(grp);
                auto a = adjoint_complex(k, grp, z);
                extra = {{"center", center_json(z)}, {"center_intersection", a.center_intersection}};
                k = std::move(a.complex);
            }
            if (!cx_out.empty()) k.save(cx_out);
            auto j = complex_json(k, false);
            if (adjoint) j["adjoint"] = extra;
            return emit(g, j, std::to_string(k.face_count()) + " faces", k.simply_transitive());
        };
    });
    auto* cverify = cx->add_subcommand("verify", "connectivity, transitivity and intersections of a saved complex");
    cverify->add_option("file", cx_in)->required();
    cverify->callback([&] {
        action = [&] {
            auto k = CosetComplex::load(cx_in);
            auto j = complex_json(k, true);
            const bool pass = k.simply_transitive() && j["connectivity"]["ok"].get<bool>();
            return emit(g, j, pass ? "verified" : "verification failed", pass);
        };
    });

    // spectra link
    auto* spectra = app.add_subcommand("spectra", "link spectra");
    spectra->require_subcommand(1);
    auto* slink = spectra->add_subcommand("link", "lambda2 of a Case 2 / Case 3 link");
    int which = 2;
    std::string method = "both", csv;
    slink->add_option("--case", which)->required()->check(CLI::IsMember({2, 3}));
    slink->add_option("--p", p)->required();
    slink->add_option("--m", m)->required()->check(CLI::Range(1, kMaxExtension));
    slink->add_option("--method", method)->check(CLI::IsMember({"charsum", "power", "both"}));
    slink->add_option("--csv", csv, "dump the character-sum spectrum");
    slink->callback([&] {
        action = [&] {
            auto cs = case_span(which, p);
            Field f(p, m);
            SpanGroup sg(cs.re.phi(), cs.psi, f, &cs.re);
            Json j = {{"case", which}, {"p", p}, {"m", m}, {"method", method}, {"bound", std::sqrt(cs.bound2)}};
            std::optional<double> exact, power;
            if (method != "power") {
                if (m < cs.uncapped_m)
                    throw DomainError("character sums describe the uncapped box m >= " + std::to_string(cs.uncapped_m));
                auto rep = which == 2 ? charsum_case2(p) : charsum_case3(p, case3_constant(sg));
                exact = rep.lambda2;
                j["charsum"] = spectral_json(rep);
                if (!csv.empty()) {
                    std::ofstream out(csv);
                    out << "numerator,denominator,value,multiplicity\n";
                    for (auto [num, mult] : rep.exact)
                        out << num << "," << rep.denominator << "," << double(num) / double(rep.denominator) << "," << mult << "\n";
                }
            }
            if (method != "charsum") {
                auto side = cayley_side(sg);
                j["vertices"] = side.vertices();
                j["degree"] = side.degree();
                auto rep = cayley_second_eigenvalue(side, {1e-9, 5000, g.seed, false});
                power = rep.lambda2;
                j["power"] = spectral_json(rep);
            }
            const double sq = exact ? *exact : *power;
            j["squared_lambda2"] = sq;
            j["lambda2"] = std::sqrt(std::max(0.0, sq));
            bool pass = sq <= cs.bound2 + 1e-9;
            if (exact && power) {
                const bool agree = std::abs(*exact - *power) <= 1e-6;
                j["agree"] = agree;
                pass = pass && agree;
            }
            j["within_bound"] = sq <= cs.bound2 + 1e-9;
            return emit(g, j, "lambda2 = " + std::to_string(std::sqrt(std::max(0.0, sq))), pass);
        };
    });

    // g2 explore
    auto* g2 = app.add_subcommand("g2", "G2 squared-link exploration (no bound is claimed)");
    g2->require_subcommand(1);
    auto* gex = g2->add_subcommand("explore", "walk counts, connectivity, lambda2");
    std::string g2case, g2map = "displayed";
    int kmax = 2;
    std::uint64_t max_power = 400'000;
    gex->add_option("--case", g2case)->required()->check(CLI::IsMember({"I", "II"}));
    gex->add_option("--p", p)->required();
    gex->add_option("--m", m)->check(CLI::Range(1, kMaxExtension));
    gex->add_option("--k", kmax)->check(CLI::Range(1, 4));
    gex->add_option("--map", g2map)->check(CLI::IsMember({"displayed", "amended"}));
    gex->add_option("--max-power-vertices", max_power);
    gex->callback([&] {
        action = [&] {
            Field f(p, m);
            G2ExploreOptions opt;
            opt.max_k = kmax;
            opt.max_power_vertices = max_power;
            opt.power.seed = g.seed;
            opt.power.tol = 1e-8;
            auto ex = explore_g2(parse_g2_case(g2case), f, g2map == "amended" ? G2Map::Amended : G2Map::Displayed, opt);
            return emit(g, g2_json(ex), std::to_string(ex.findings.size()) + " findings", true);
        };
    });

    // certify
    auto* cert = app.add_subcommand("certify", "HDX certificate of a coset complex (d = 2)");
    bool allow_small = false;
    cert->add_option("--family", family)->required();
    cert->add_option("--rank", rank)->required();
    cert->add_option("--p", p)->required();
    cert->add_option("--m", m)->check(CLI::Range(1, kMaxExtension));
    cert->add_option("--sset", sset)->check(CLI::IsMember({"special", "alt"}));
    cert->add_flag("--allow-small-p", allow_small, "permit p <= 3 for experiments");
    cert->callback([&] {
        action = [&]() -> int {
            const auto fam = parse_family(family);
            if (fam == Family::G) {
                Json j = {{"supported", false}, {"finding", "unsupported: G2 is outside the theorem's hypotheses"}, {"pass", false}};
                return emit(g, j, "unsupported: G2", false);
            }
            if (m != 1) throw DomainError("complexes are built from the enumerated group at m = 1");
            if (p <= 3 && !allow_small) throw DomainError("certificates need p > 3 (use --allow-small-p)");
            auto re = realization_for(fam, rank);
            auto grp = GroupTable::enumerate(re, p);
            auto k = build_complex(grp, pick_set(re.phi(), sset), sset);
            auto c = hdx_certificate(k, {1e-10, 5000, g.seed, false});
            auto j = certificate_json(c);
            j["complex"] = complex_json(k, false);
            return emit(g, j, c.pass ? "certificate: pass" : "certificate: fail", c.pass);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }
    if (g.threads > 0) omp_set_num_threads(g.threads);
    try {
        return action();
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ResourceError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kResource;
    } catch (const IntegrityError& e) {
        std::cerr << "integrity failure: " << e.what() << "\n";
        return kFailed;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return kFailed;
    }
}
