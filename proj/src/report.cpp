#include "hdx/report.hpp"

namespace hdx {

namespace {

Json root_list(const std::vector<Root>& rs) {
    Json a = Json::array();
    for (const auto& r : rs) a.push_back(r.coords());
    return a;
}

Json walk_rows(const std::vector<G2WalkRow>& rows) {
    Json a = Json::array();
    for (const auto& w : rows)
        a.push_back({{"k", w.k},
                     {"system", w.system},
                     {"trace", w.trace},
                     {"displayed", w.displayed},
                     {"agree", w.system == w.trace},
                     {"transitive", w.transitive}});
    return a;
}

}  // namespace

Json root_system_json(const RootSystem& phi) {
    auto s = special_set(phi);
    return {{"family", std::string(1, family_char(phi.family()))},
            {"rank", phi.rank()},
            {"label", phi.label()},
            {"size", phi.size()},
            {"coordinate_scale", 2},
            {"roots", root_list(phi.roots())},
            {"simples", root_list(phi.simples())},
            {"special_set", root_list(s.members)}};
}

Json field_json(const Field& f) {
    return {{"p", f.p()}, {"m", f.m()}, {"order", f.order()}, {"modulus", f.modulus()}};
}

Json spectral_json(const SpectralReport& r) {
    Json j = {{"lambda2", r.lambda2}, {"lo", r.lo}, {"hi", r.hi}, {"method", r.method}, {"iterations", r.iterations}};
    if (r.denominator) {
        Json ex = Json::object();
        for (auto [num, mult] : r.exact) ex[std::to_string(num)] = mult;
        j["exact"] = {{"denominator", r.denominator}, {"spectrum", ex}};
    }
    return j;
}

Json connectivity_json(const ConnectivityReport& r) {
    Json w = Json::array();
    for (auto [t, v] : r.witness) w.push_back({t, v});
    return {{"complex_connected", r.complex_connected},
            {"links_checked", r.links_checked},
            {"links_disconnected", r.links_disconnected},
            {"witness", w},
            {"ok", r.ok()}};
}

Json link_json(const LinkGraph& l) {
    return {{"left", l.left},
            {"right", l.right},
            {"edges", l.edges.size()},
            {"degree", l.degree()},
            {"provenance", l.provenance}};
}

Json certificate_json(const Certificate& c) {
    Json links = Json::array();
    for (const auto& l : c.links)
        links.push_back({{"type", l.type}, {"vertices", l.vertices}, {"degree", l.degree}, {"spectrum", spectral_json(l.report)}});
    Json j = {{"supported", c.supported},
              {"note", c.note},
              {"connected", c.connected},
              {"connectivity", connectivity_json(c.connectivity)},
              {"links", links},
              {"gamma", c.gamma},
              {"pass", c.pass}};
    j["trickle"] = c.trickle ? Json(*c.trickle) : Json(nullptr);
    j["corollary"] = c.corollary ? Json(*c.corollary) : Json(nullptr);
    return j;
}

Json g2_json(const G2Exploration& e) {
    Json j = {{"case", to_string(e.which)},
              {"map", e.map == G2Map::Displayed ? "displayed" : "amended"},
              {"p", e.p},
              {"m", e.m},
              {"vertices", e.vertices},
              {"degree", e.degree},
              {"symmetric", e.symmetric},
              {"reachable", e.reachable},
              {"connected", e.reachable == e.vertices},
              {"walk_counts", walk_rows(e.walks)},
              {"findings", e.findings},
              {"exploratory", true}};
    j["trace_identity"] = e.trace_identity ? Json(*e.trace_identity) : Json(nullptr);
    j["dense_lambda2"] = e.dense_lambda2 ? Json(*e.dense_lambda2) : Json(nullptr);
    j["matches_group"] = e.matches_group ? Json(*e.matches_group) : Json(nullptr);
    j["lambda2"] = e.lambda2 ? spectral_json(*e.lambda2) : Json(nullptr);
    return j;
}

Json center_json(const CenterDesc& z) {
    return {{"size", z.elements.size()}, {"expected", z.expected}, {"footnote", z.footnote}};
}

Json complex_json(const CosetComplex& k, bool check_connectivity) {
    Json types = Json::array();
    for (const auto& d : degree_stats(k))
        types.push_back({{"type", d.type},
                         {"vertices", d.vertices},
                         {"subgroup_size", k.subgroup(d.type).size()},
                         {"min_faces", d.min_faces},
                         {"max_faces", d.max_faces}});
    Json j = {{"realization", k.meta().realization},
              {"set", k.meta().set},
              {"p", k.meta().p},
              {"m", k.meta().m},
              {"group_order", k.group_size()},
              {"types", types},
              {"partite", k.types()},
              {"faces", k.face_count()},
              {"total_vertices", k.total_vertices()},
              {"simply_transitive", k.simply_transitive()},
              {"trivial_intersection", k.trivial_intersection()}};
    if (check_connectivity) j["connectivity"] = connectivity_json(connectivity_check(k));
    return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace hdx
