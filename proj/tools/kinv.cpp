// Command line front end for the k-invariant engine. JSON files in, text and
// optional JSON out. Exit codes: 0 for success or a positive verdict, 1 for a
// mathematically negative verdict (invalid complex under validate, nonzero
// class, obstructed extension, failed property suite), 2 for usage or input
// problems. Runs are deterministic for fixed input files and seed; --seed
// randomizes interior choices that the results provably do not depend on.

#include <kinv/checks.hpp>
#include <kinv/extension.hpp>
#include <kinv/json_io.hpp>
#include <kinv/models.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace kinv;
using jsonio::json;

std::string abelian_name(const std::vector<Int>& factors) {
    long free_rank = 0;
    std::vector<Int> torsion;
    for (const auto& f : factors) {
        if (f == 0)
            ++free_rank;
        else if (f != 1 && f != -1)
            torsion.push_back(f < 0 ? Int(-f) : f);
    }
    std::string s;
    auto add = [&](const std::string& part) {
        if (!s.empty()) s += " + ";
        s += part;
    };
    if (free_rank == 1) add("Z");
    if (free_rank > 1) add("Z^" + std::to_string(free_rank));
    for (const auto& t : torsion) add("Z/" + t.str());
    return s.empty() ? "0" : s;
}

std::string module_name(const PiModule& m) {
    return abelian_name(cokernel_presentation(m.relations).factors);
}

void print_int_matrix(const IntMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) {
        std::cout << "  (" << m.rows() << " x " << m.cols() << ", empty)\n";
        return;
    }
    for (long i = 0; i < m.rows(); ++i) {
        std::cout << "  [";
        for (long j = 0; j < m.cols(); ++j) std::cout << (j ? " " : "") << m.at(i, j);
        std::cout << "]\n";
    }
}

SubcomplexMarker parse_sub_spec(const std::string& spec, const ChainComplex& x,
                                const std::optional<SubcomplexMarker>& embedded) {
    if (spec.empty()) return embedded ? *embedded : SubcomplexMarker::none();
    if (spec == "none") return SubcomplexMarker::none();
    if (spec == "full") return SubcomplexMarker::full(x);
    if (spec.rfind("skeleton", 0) == 0) {
        auto tail = spec.substr(8);
        if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
            throw Error("bad subcomplex spec '" + spec + "', expected skeleton<degree>");
        return SubcomplexMarker::skeleton(x, std::stol(tail));
    }
    return jsonio::marker_from_json(jsonio::load_json_file(spec));
}

// Commands other than validate insist on mathematically valid inputs.
jsonio::ParsedComplex load_valid_complex(const std::string& path) {
    auto parsed = jsonio::complex_from_json(jsonio::load_json_file(path));
    auto issues = validate_complex(parsed.k);
    if (!issues.empty()) throw Error(path + ": " + issues.front());
    if (parsed.sub) {
        auto mi = validate_marker(parsed.k, *parsed.sub);
        if (!mi.empty()) throw Error(path + ": " + mi.front());
    }
    return parsed;
}

void require_marker(const ChainComplex& x, const SubcomplexMarker& m) {
    auto issues = validate_marker(x, m);
    if (!issues.empty()) throw Error(issues.front());
}

bool marker_is_full(const ChainComplex& x, const SubcomplexMarker& m) {
    for (long i = 0; i <= x.top(); ++i)
        if (m.count(i) != x.rank(i)) return false;
    return true;
}

int cmd_validate(const std::string& file) {
    auto parsed = jsonio::complex_from_json(jsonio::load_json_file(file));
    auto issues = validate_complex(parsed.k);
    if (parsed.sub) {
        auto mi = validate_marker(parsed.k, *parsed.sub);
        issues.insert(issues.end(), mi.begin(), mi.end());
    }
    if (!issues.empty()) {
        for (const auto& s : issues) std::cout << s << "\n";
        return 1;
    }
    std::cout << "valid: group order " << parsed.k.g->order << ", ranks";
    for (long r : parsed.k.ranks) std::cout << ' ' << r;
    if (parsed.k.has_aug) std::cout << ", augmented";
    if (parsed.sub) {
        std::cout << ", marked counts";
        for (long i = 0; i <= parsed.k.top(); ++i) std::cout << ' ' << parsed.sub->count(i);
    }
    std::cout << "\n";
    return 0;
}

int cmd_homology(const std::string& file, long degree) {
    auto parsed = load_valid_complex(file);
    std::vector<long> degrees;
    if (degree >= 0)
        degrees.push_back(degree);
    else
        for (long i = 0; i <= parsed.k.top(); ++i) degrees.push_back(i);
    for (long i : degrees) {
        auto h = homology(parsed.k, i);
        std::cout << "H_" << i << " = " << module_name(h.module) << " (" << h.module.gens
                  << " generator(s) carrying the group action)\n";
    }
    return 0;
}

int cmd_resolve(const std::string& file, long top, const std::string& out) {
    auto j = jsonio::load_json_file(file);
    GroupPtr g;
    if (j.is_object() && j.contains("ranks"))
        g = jsonio::complex_from_json(j).k.g;
    else if (j.is_object() && j.contains("group"))
        g = jsonio::group_from_json(j.at("group"));
    else
        g = jsonio::group_from_json(j);
    auto res = build_resolution(g, top);
    auto out_json = jsonio::complex_to_json(res);
    if (out.empty()) {
        std::cout << out_json.dump(1) << "\n";
    } else {
        jsonio::write_json_file(out, out_json);
        std::cout << "wrote a free resolution through degree " << top << ", ranks";
        for (long r : res.ranks) std::cout << ' ' << r;
        std::cout << "\n";
    }
    return 0;
}

int cmd_k(const std::string& file, const std::string& subspec, long restop,
          std::optional<unsigned long> seed, const std::string& out) {
    auto parsed = load_valid_complex(file);
    const auto& x = parsed.k;
    auto marker = parse_sub_spec(subspec, x, parsed.sub);
    require_marker(x, marker);
    if (!is_acyclic_below(x, 2))
        throw Error("the class is undefined: complex is not acyclic below degree two");

    std::optional<std::mt19937_64> rng;
    if (seed) rng.emplace(*seed);
    auto* rp = rng ? &*rng : nullptr;

    auto res = build_resolution(x.g, restop);
    auto t = lift_augmented_map(x, res, 3, rp);
    auto cls = k_invariant(x, marker, t, rp);

    const long cone3 = cls.datum->cone.cone.rank(3);
    std::cout << "pair: group order " << x.g->order << ", ranks";
    for (long r : x.ranks) std::cout << ' ' << r;
    std::cout << ", marked counts";
    for (long i = 0; i <= x.top(); ++i) std::cout << ' ' << marker.count(i);
    std::cout << "\n";
    std::cout << "coefficients: H_2 = " << module_name(cls.coeff) << " on " << cls.coeff.gens
              << " generator(s)\n";
    std::cout << "cone cells in degree three: " << cone3 << " (" << cls.datum->cpi.rank(3)
              << " resolution cells + " << cls.datum->l.rank(2) << " marked two cells)\n";
    std::cout << "representative cocycle (rows = coefficient generators, columns = cone cells):\n";
    print_int_matrix(cls.values);

    bool zero;
    if (cls.coeff.gens == 0 || cone3 == 0) {
        if (!classes_equal(cls, zero_class(cls)))
            throw Error("internal: trivial cone but the coboundary solver disagrees");
        zero = true;
        std::cout << "class: zero (trivial cone)\n";
    } else {
        bool direct = classes_equal(cls, zero_class(cls));
        bool criterion = class_vanishes(x, marker, t, rp);
        if (direct != criterion)
            throw Error("internal: cylinder criterion disagrees with the coboundary solver");
        zero = criterion;
        std::cout << "class: " << (zero ? "zero" : "nonzero")
                  << " (cylinder criterion, cross checked against the coboundary solver)\n";
    }

    if (!marker_is_full(x, marker)) {
        auto cfull = k_invariant(x, SubcomplexMarker::full(x), t, rp);
        auto h = nested_inclusion_chain_map(x, marker, SubcomplexMarker::full(x));
        auto pulled = pullback_class(cfull, *cls.datum, h, {});
        if (!classes_equal(pulled, cls))
            throw Error("internal: restriction of the full pair class disagrees");
        std::cout << "pullback from the full pair: consistent\n";
    }

    if (!out.empty()) {
        json j;
        j["format"] = 1;
        j["zero"] = zero;
        j["cone_rank3"] = cone3;
        json fac = json::array();
        for (const auto& f : cokernel_presentation(cls.coeff.relations).factors)
            fac.push_back(jsonio::int_to_ll(f));
        j["coefficient_factors"] = std::move(fac);
        j["values"] = jsonio::int_matrix_to_json(cls.values);
        jsonio::write_json_file(out, j);
    }
    return zero ? 0 : 1;
}

json class_to_json(const CohomologyClass& c) {
    json j;
    json fac = json::array();
    for (const auto& f : cokernel_presentation(c.coeff.relations).factors)
        fac.push_back(jsonio::int_to_ll(f));
    j["coefficient_factors"] = std::move(fac);
    j["values"] = jsonio::int_matrix_to_json(c.values);
    return j;
}

// Shared tail of the extend command: re-verify, report, serialize.
int report_extension(const ExtensionReport& rep, const ExtensionData& core,
                     const std::string& out, std::mt19937_64* rp) {
    if (rep.exists) {
        auto chk = verify_extension(core, rep.f, rp);
        if (!chk.ok) throw Error("internal: produced map failed verification: " + chk.issues.front());
        std::cout << "extension exists; verified independently\n";
        for (long i = 0; i < (long)rep.f.f.size(); ++i)
            std::cout << "  f_" << i << ": " << rep.f.f[i].rows << " x " << rep.f.f[i].cols << "\n";
    } else {
        std::cout << "obstructed: the pushed and pulled classes differ in degree three "
                  << "cone cohomology\n";
        std::cout << "difference class over " << module_name(rep.difference.coeff) << ":\n";
        print_int_matrix(rep.difference.values);
    }
    if (!out.empty()) {
        json j;
        j["format"] = 1;
        j["exists"] = rep.exists;
        if (rep.exists) {
            json fs = json::array();
            for (const auto& m : rep.f.f) fs.push_back(jsonio::gr_matrix_to_json(m));
            j["f"] = std::move(fs);
            json gs = json::array();
            for (const auto& m : rep.glue) gs.push_back(jsonio::gr_matrix_to_json(m));
            j["glue"] = std::move(gs);
        }
        j["pushed"] = class_to_json(rep.pushed);
        j["pulled"] = class_to_json(rep.pulled);
        j["difference"] = class_to_json(rep.difference);
        jsonio::write_json_file(out, j);
    }
    return rep.exists ? 0 : 1;
}

ChainMapData identity_shaped_map(const ChainComplex& src, const ChainComplex& tgt,
                                 const char* what) {
    if (src.ranks != tgt.ranks)
        throw Error(std::string(what) + ": marked subcomplexes have different ranks; supply --map");
    ChainMapData h;
    h.source = src;
    h.target = tgt;
    for (long i = 0; i <= src.top(); ++i) h.f.push_back(GroupRingMatrix::identity(src.g, src.rank(i)));
    return h;
}

int cmd_extend(const std::string& file0, const std::string& file1, const std::string& sub0,
               const std::string& sub1, const std::string& hpath, const std::string& fspec,
               long restop, std::optional<unsigned long> seed, const std::string& out) {
    auto p0 = load_valid_complex(file0);
    auto p1 = load_valid_complex(file1);
    auto m0 = parse_sub_spec(sub0, p0.k, p0.sub);
    auto m1 = parse_sub_spec(sub1, p1.k, p1.sub);
    require_marker(p0.k, m0);
    require_marker(p1.k, m1);

    json hj;
    if (!hpath.empty()) hj = jsonio::load_json_file(hpath);
    bool twisted = hj.is_object() && hj.contains("iso");
    if (!same_group(p0.k.g, p1.k.g) && !twisted)
        throw Error("complexes live over different groups; supply an isomorphism "
                    "(\"iso\": [...]) in the --map file");

    std::optional<std::mt19937_64> rng;
    if (seed) rng.emplace(*seed);
    auto* rp = rng ? &*rng : nullptr;

    auto h2 = homology(p0.k, 2);
    auto h2p = homology(p1.k, 2);

    if (!twisted) {
        auto res = build_resolution(p0.k.g, restop);
        ExtensionData in;
        in.k = p0.k;
        in.lmark = m0;
        in.t = lift_augmented_map(p0.k, res, 3, rp);
        in.kp = p1.k;
        in.lpmark = m1;
        in.tp = lift_augmented_map(p1.k, res, 3, rp);
        auto l0 = subcomplex(p0.k, m0);
        auto l1 = subcomplex(p1.k, m1);
        in.h = hj.is_object() && hj.contains("maps") ? jsonio::chain_map_from_json(hj, l0, l1)
                                                     : identity_shaped_map(l0, l1, "extend");
        if (fspec == "id") {
            if (!detail::modules_identical(h2.module, h2p.module))
                throw Error("--F id needs identical degree two homology presentations; "
                            "supply a matrix file");
            in.F = identity_hom(h2.module);
        } else if (fspec == "zero") {
            in.F = zero_hom(h2.module, h2p.module);
        } else {
            auto fj = jsonio::load_json_file(fspec);
            if (fj.contains("twist"))
                throw Error("--F file carries a twist but no isomorphism was supplied");
            in.F = PiModuleHom{h2.module, h2p.module,
                               jsonio::int_matrix_from_json(fj.at("matrix"), h2p.module.gens,
                                                            h2.module.gens),
                               std::nullopt};
            auto issues = validate_pi_module_hom(in.F);
            if (!issues.empty()) throw Error("--F file: " + issues.front());
        }
        auto rep = decide_extension(in, rp);
        return report_extension(rep, in, out, rp);
    }

    auto u = make_group_iso(p0.k.g, p1.k.g, hj.at("iso").get<std::vector<long>>());
    TwistedExtensionData tin;
    tin.k = p0.k;
    tin.lmark = m0;
    tin.t = lift_augmented_map(p0.k, build_resolution(p0.k.g, restop), 3, rp);
    tin.kp = p1.k;
    tin.lpmark = m1;
    tin.tp = lift_augmented_map(p1.k, build_resolution(p1.k.g, restop), 3, rp);
    tin.u = u;
    auto l0 = subcomplex(p0.k, m0);
    auto l1r = restrict_scalars_complex(u, subcomplex(p1.k, m1));
    tin.h = hj.contains("maps") ? jsonio::chain_map_from_json(hj, l0, l1r)
                                : identity_shaped_map(l0, l1r, "extend");
    if (fspec == "zero") {
        tin.F = zero_hom(h2.module, h2p.module);
        tin.F.twist = u;
    } else if (fspec == "id") {
        throw Error("--F id is not meaningful across an isomorphism; supply a matrix file");
    } else {
        auto fj = jsonio::load_json_file(fspec);
        if (fj.contains("twist") && fj.at("twist").get<std::vector<long>>() != u.map)
            throw Error("--F file twist does not match the supplied isomorphism");
        tin.F = PiModuleHom{h2.module, h2p.module,
                            jsonio::int_matrix_from_json(fj.at("matrix"), h2p.module.gens,
                                                         h2.module.gens),
                            u};
        auto issues = validate_pi_module_hom(tin.F);
        if (!issues.empty()) throw Error("--F file: " + issues.front());
    }
    auto outc = decide_extension_twisted(tin, rp);
    return report_extension(outc.report, outc.core, out, rp);
}

int cmd_check(const std::string& lemma, unsigned long seed, long trials) {
    for (const auto& s : checks::suites()) {
        if (lemma != s.name) continue;
        auto r = s.run(seed, trials);
        if (r.empty()) {
            std::cout << "ok: " << lemma << " held on " << trials << " randomized trial(s), seed "
                      << seed << "\n";
            return 0;
        }
        std::cout << "counterexample: " << r << "\n";
        return 1;
    }
    std::cerr << "unknown property '" << lemma << "'; known:";
    for (const auto& s : checks::suites()) std::cerr << ' ' << s.name;
    std::cerr << "\n";
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact relative first k-invariants of chain complexes over finite group rings"};
    app.require_subcommand(1);

    std::string vfile;
    auto* cval = app.add_subcommand("validate", "check a complex file against the structural rules");
    cval->add_option("file", vfile, "complex JSON file")->required();

    std::string hfile;
    long hdegree = -1;
    auto* chom = app.add_subcommand("homology", "print homology groups of a complex");
    chom->add_option("file", hfile, "complex JSON file")->required();
    chom->add_option("--degree", hdegree, "single degree (default: all)");

    std::string rfile, rout;
    long rtop = 5;
    auto* cres = app.add_subcommand("resolve", "emit a free resolution of the trivial module");
    cres->add_option("file", rfile, "group or complex JSON file")->required();
    cres->add_option("--top", rtop, "top degree")->check(CLI::Range(1l, 32l));
    cres->add_option("--out", rout, "output path (default: stdout)");

    std::string kfile, ksub, kout;
    long krestop = 5;
    unsigned long kseed = 0;
    auto* ck = app.add_subcommand("k", "compute the relative first k-invariant of a marked pair");
    ck->add_option("file", kfile, "complex JSON file")->required();
    ck->add_option("--sub", ksub, "subcomplex: none, full, skeleton<j>, or a marker file");
    ck->add_option("--resolution-top", krestop, "resolution length")->check(CLI::Range(4l, 32l));
    auto* kseedopt = ck->add_option("--seed", kseed, "randomize interior choices");
    ck->add_option("--out", kout, "write the class as JSON");

    std::string efile0, efile1, esub0, esub1, ehpath, efspec = "id", eout;
    long erestop = 5;
    unsigned long eseed = 0;
    auto* cext = app.add_subcommand("extend", "decide whether a coefficient map extends to a map of pairs");
    cext->add_option("first", efile0, "source complex JSON file")->required();
    cext->add_option("second", efile1, "target complex JSON file")->required();
    cext->add_option("--sub0", esub0, "source subcomplex spec");
    cext->add_option("--sub1", esub1, "target subcomplex spec");
    cext->add_option("--map", ehpath, "chain map file joining the subcomplexes (may carry \"iso\")");
    cext->add_option("--F", efspec, "coefficient map: id, zero, or a matrix file");
    cext->add_option("--resolution-top", erestop, "resolution length")->check(CLI::Range(4l, 32l));
    auto* eseedopt = cext->add_option("--seed", eseed, "randomize interior choices");
    cext->add_option("--out", eout, "write the decision as JSON");

    std::string clemma;
    long ctrials = 5;
    unsigned long cseed = 0;
    auto* cchk = app.add_subcommand("check", "run a randomized property suite");
    cchk->add_option("property", clemma, "suite name (see --help for the list)")->required();
    cchk->add_option("--seed", cseed, "random seed");
    cchk->add_option("--trials", ctrials, "trial count")->check(CLI::Range(1l, 10000l));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cval) return cmd_validate(vfile);
        if (*chom) return cmd_homology(hfile, hdegree);
        if (*cres) return cmd_resolve(rfile, rtop, rout);
        if (*ck)
            return cmd_k(kfile, ksub, krestop,
                         kseedopt->count() ? std::optional<unsigned long>(kseed) : std::nullopt,
                         kout);
        if (*cext)
            return cmd_extend(efile0, efile1, esub0, esub1, ehpath, efspec, erestop,
                              eseedopt->count() ? std::optional<unsigned long>(eseed) : std::nullopt,
                              eout);
        if (*cchk) return cmd_check(clemma, cseed, ctrials);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
