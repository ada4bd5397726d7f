#include "nuq/linkdiag.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <regex>
#include <set>

namespace nuq {

using json = nlohmann::json;

namespace {

std::string join_rules(const std::vector<Violation>& v) {
    std::string s = "invalid diagram:";
    for (const auto& x : v) s += " [" + x.rule + "] " + x.message + ";";
    return s;
}

bool valid_name(const std::string& s) {
    static const std::regex re("[A-Za-z0-9_']+");
    return std::regex_match(s, re);
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> v)
    : std::runtime_error(join_rules(v)), violations(std::move(v)) {}

int LinkDiagram::arc_by_name(std::string_view name) const {
    for (std::size_t i = 0; i < arc_names.size(); ++i)
        if (arc_names[i] == name) return static_cast<int>(i);
    return -1;
}

void LinkDiagram::rebuild_kappa() {
    kappa.assign(n_arcs, -1);
    for (std::size_t c = 0; c < components.size(); ++c)
        for (ArcId a : components[c].arcs)
            if (a >= 0 && a < n_arcs) kappa[a] = static_cast<int>(c);
}

std::vector<Violation> validate(const LinkDiagram& d) {
    std::vector<Violation> out;
    auto arc_ok = [&](ArcId a) { return a >= 0 && a < d.n_arcs; };
    auto nm = [&](ArcId a) {
        if (arc_ok(a) && a < static_cast<int>(d.arc_names.size())) return d.arc_names[a];
        return std::to_string(a);
    };

    for (std::size_t j = 0; j < d.crossings.size(); ++j) {
        const Crossing& c = d.crossings[j];
        if (!arc_ok(c.over) || !arc_ok(c.under[0]) || !arc_ok(c.under[1]))
            out.push_back({"arc-range", "crossing " + std::to_string(j) + " references an unknown arc"});
    }

    std::vector<int> owner(d.n_arcs, -1);
    std::vector<int> crossing_uses(d.crossings.size(), 0);
    for (std::size_t ci = 0; ci < d.components.size(); ++ci) {
        const Component& comp = d.components[ci];
        std::string cname = "component " + std::to_string(ci);
        if (comp.arcs.empty()) {
            out.push_back({"component-empty", cname + " has no arcs"});
            continue;
        }
        bool arcs_good = true;
        for (ArcId a : comp.arcs) {
            if (!arc_ok(a)) {
                out.push_back({"arc-range", cname + " references an unknown arc"});
                arcs_good = false;
                continue;
            }
            if (owner[a] == static_cast<int>(ci)) {
                out.push_back({"arc-repeated", cname + " lists arc " + nm(a) + " twice"});
            } else if (owner[a] >= 0) {
                out.push_back({"arc-multi-component", "arc in multiple components: " + nm(a)});
            } else {
                owner[a] = static_cast<int>(ci);
            }
        }
        for (int x : comp.crossings) {
            if (x < 0 || x >= static_cast<int>(d.crossings.size())) {
                out.push_back({"crossing-range", cname + " references crossing " + std::to_string(x)});
                arcs_good = false;
            } else {
                ++crossing_uses[x];
            }
        }
        std::size_t k = comp.arcs.size();
        if (comp.crossings.empty() && k == 1) continue;
        if (comp.crossings.size() != k) {
            out.push_back({"component-alignment", cname + " has " + std::to_string(k) + " arcs but " +
                                                      std::to_string(comp.crossings.size()) +
                                                      " crossings"});
            continue;
        }
        if (!arcs_good) continue;
        for (std::size_t j = 0; j < k; ++j) {
            const Crossing& c = d.crossings[comp.crossings[j]];
            std::multiset<ArcId> want{comp.arcs[j], comp.arcs[(j + 1) % k]};
            std::multiset<ArcId> have{c.under[0], c.under[1]};
            if (want != have)
                out.push_back({"component-alignment",
                               cname + ": crossing " + std::to_string(comp.crossings[j]) +
                                   " does not join arcs " + nm(comp.arcs[j]) + " and " +
                                   nm(comp.arcs[(j + 1) % k])});
        }
    }
    for (std::size_t j = 0; j < d.crossings.size(); ++j) {
        if (crossing_uses[j] != 1)
            out.push_back({"crossing-usage", "crossing " + std::to_string(j) + " is used " +
                                                 std::to_string(crossing_uses[j]) +
                                                 " times as an under-crossing"});
    }
    for (int a = 0; a < d.n_arcs; ++a) {
        if (owner[a] < 0) out.push_back({"kappa-total", "arc " + nm(a) + " belongs to no component"});
    }
    if (static_cast<int>(d.kappa.size()) != d.n_arcs) {
        out.push_back({"kappa-consistent", "component map has wrong size"});
    } else {
        for (int a = 0; a < d.n_arcs; ++a)
            if (owner[a] >= 0 && d.kappa[a] != owner[a])
                out.push_back({"kappa-consistent", "component map disagrees for arc " + nm(a)});
    }
    return out;
}

LinkDiagram parse_diagram(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("syntax error: ") + e.what(), e.byte);
    }
    if (!doc.is_object()) throw ParseError("syntax error: top level must be a map", 0);

    LinkDiagram d;
    std::map<std::string, int> ids;
    std::vector<Violation> bad;
    auto intern = [&](const json& v, bool may_create) -> int {
        if (!v.is_string()) throw ParseError("syntax error: arc names must be strings", 0);
        std::string s = v.get<std::string>();
        if (!valid_name(s)) throw ParseError("syntax error: bad arc name '" + s + "'", 0);
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        if (!may_create) {
            bad.push_back({"arc-undeclared", "arc " + s + " is not declared"});
            return -1;
        }
        int id = static_cast<int>(d.arc_names.size());
        ids.emplace(s, id);
        d.arc_names.push_back(s);
        return id;
    };

    for (const auto& [key, _] : doc.items())
        if (key != "arcs" && key != "crossings" && key != "components")
            throw ParseError("syntax error: unknown key '" + key + "'", 0);

    bool declared = doc.contains("arcs");
    if (declared) {
        if (!doc["arcs"].is_array()) throw ParseError("syntax error: 'arcs' must be a list", 0);
        for (const auto& a : doc["arcs"]) {
            std::size_t before = d.arc_names.size();
            intern(a, true);
            if (d.arc_names.size() == before)
                bad.push_back({"arc-duplicate", "arc " + a.get<std::string>() + " declared twice"});
        }
    }
    if (!doc.contains("components") || !doc["components"].is_array())
        throw ParseError("syntax error: 'components' list is required", 0);
    const json crossings_doc = doc.value("crossings", json::array());
    if (!crossings_doc.is_array()) throw ParseError("syntax error: 'crossings' must be a list", 0);

    for (const auto& cj : doc["components"]) {
        if (!cj.is_object() || !cj.contains("arcs") || !cj["arcs"].is_array())
            throw ParseError("syntax error: each component needs an 'arcs' list", 0);
        Component comp;
        for (const auto& a : cj["arcs"]) comp.arcs.push_back(intern(a, !declared));
        if (cj.contains("crossings")) {
            if (!cj["crossings"].is_array()) throw ParseError("syntax error: component crossings must be a list", 0);
            for (const auto& x : cj["crossings"]) {
                if (!x.is_number_integer()) throw ParseError("syntax error: crossing indices must be integers", 0);
                comp.crossings.push_back(x.get<int>());
            }
        }
        d.components.push_back(std::move(comp));
    }
    for (const auto& cj : crossings_doc) {
        if (!cj.is_array() || cj.size() != 3)
            throw ParseError("syntax error: a crossing is [over, under1, under2]", 0);
        Crossing c;
        c.over = intern(cj[0], false);
        c.under = {intern(cj[1], false), intern(cj[2], false)};
        d.crossings.push_back(c);
    }
    d.n_arcs = static_cast<int>(d.arc_names.size());
    d.rebuild_kappa();
    if (bad.empty()) {
        auto v = validate(d);
        bad.insert(bad.end(), v.begin(), v.end());
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
    return d;
}

std::string serialize_diagram(const LinkDiagram& d) {
    json doc;
    doc["arcs"] = d.arc_names;
    json cr = json::array();
    for (const Crossing& c : d.crossings)
        cr.push_back({d.arc_names[c.over], d.arc_names[c.under[0]], d.arc_names[c.under[1]]});
    doc["crossings"] = cr;
    json comps = json::array();
    for (const Component& c : d.components) {
        json arcs = json::array();
        for (ArcId a : c.arcs) arcs.push_back(d.arc_names[a]);
        comps.push_back({{"arcs", arcs}, {"crossings", c.crossings}});
    }
    doc["components"] = comps;
    return doc.dump();
}

bool is_even(const LinkDiagram& d) {
    return std::all_of(d.components.begin(), d.components.end(),
                       [](const Component& c) { return c.arcs.size() % 2 == 0; });
}

LinkDiagram make_even(const LinkDiagram& d) {
    if (is_even(d)) return d;
    LinkDiagram e = d;
    auto fresh_name = [&](const std::string& base) {
        std::string s = base + "_k";
        for (int i = 2; e.arc_by_name(s) >= 0; ++i) s = base + "_k" + std::to_string(i);
        return s;
    };
    for (Component& comp : e.components) {
        if (comp.arcs.size() % 2 == 0) continue;
        ArcId x = comp.arcs[0];
        ArcId xn = e.n_arcs++;
        e.arc_names.push_back(fresh_name(e.arc_names[x]));
        int kink = static_cast<int>(e.crossings.size());
        e.crossings.push_back(Crossing{x, {x, xn}});
        if (comp.crossings.empty()) {
            int back = kink + 1;
            e.crossings.push_back(Crossing{xn, {xn, x}});
            comp.arcs = {x, xn};
            comp.crossings = {kink, back};
            continue;
        }
        // the old crossing after x now follows x_new
        Crossing& old = e.crossings[comp.crossings[0]];
        if (old.under[0] == x)
            old.under[0] = xn;
        else
            old.under[1] = xn;
        comp.arcs.insert(comp.arcs.begin() + 1, xn);
        comp.crossings.insert(comp.crossings.begin(), kink);
    }
    e.rebuild_kappa();
    return e;
}

std::vector<std::pair<ArcId, ArcId>> component_walk(const LinkDiagram& d, int i) {
    const Component& comp = d.components.at(i);
    if (comp.crossings.empty()) throw std::invalid_argument("no walk");
    std::vector<std::pair<ArcId, ArcId>> w;
    for (std::size_t j = 0; j < comp.crossings.size(); ++j)
        w.emplace_back(comp.arcs[j], d.crossings[comp.crossings[j]].over);
    return w;
}

}  // namespace nuq
