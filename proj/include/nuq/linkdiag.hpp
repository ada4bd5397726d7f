#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nuq {

using ArcId = int;

struct Crossing {
    ArcId over = 0;
    std::array<ArcId, 2> under{0, 0};  // order kept for round-tripping only
};

// crossings[j] sits between arcs[j] and arcs[(j+1) % k]. A lone arc may have no crossings.
struct Component {
    std::vector<ArcId> arcs;
    std::vector<int> crossings;
};

struct LinkDiagram {
    int n_arcs = 0;
    std::vector<std::string> arc_names;
    std::vector<Crossing> crossings;
    std::vector<Component> components;
    std::vector<int> kappa;  // arc -> component, -1 if unassigned

    int mu() const { return static_cast<int>(components.size()); }
    int arc_by_name(std::string_view name) const;  // -1 if absent
    void rebuild_kappa();
};

struct Violation {
    std::string rule;
    std::string message;
};

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos) : std::runtime_error(msg), position(pos) {}
};

struct ValidationError : std::runtime_error {
    std::vector<Violation> violations;
    explicit ValidationError(std::vector<Violation> v);
};

std::vector<Violation> validate(const LinkDiagram& d);

// Throws ParseError on malformed input and ValidationError on a structurally invalid diagram.
LinkDiagram parse_diagram(std::string_view text);

// Canonical JSON text; parse_diagram(serialize_diagram(d)) reproduces d.
std::string serialize_diagram(const LinkDiagram& d);

bool is_even(const LinkDiagram& d);
LinkDiagram make_even(const LinkDiagram& d);

// (under-arc b_ij, over-arc a_ij) for each crossing along component i.
std::vector<std::pair<ArcId, ArcId>> component_walk(const LinkDiagram& d, int i);

}  // namespace nuq
