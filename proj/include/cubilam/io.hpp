#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cubilam/leaf_system.hpp"

namespace cubilam {

/// Lamination text format:
///   degree d
///   leaf a b
///   poly a b c ...
/// with angles as reduced fractions; '#' starts a comment. Serialization is
/// canonical (sorted items), so parse/serialize round-trips bit-exactly.
inline void write_lamination(std::ostream& os, const LeafSystem& L) {
    os << "degree " << L.degree << "\n";
    std::vector<ClassPolygon> polys;
    std::set<Chord> covered;
    for (const auto& p : L.polygons) {
        if (p.size() >= 3) {
            polys.push_back(p);
            for (const auto& e : p.edges()) covered.insert(e);
        }
    }
    std::sort(polys.begin(), polys.end());
    for (const auto& p : polys) {
        os << "poly";
        for (const auto& v : p.vertices) os << " " << v.str();
        os << "\n";
    }
    for (const auto& c : L.closure) {
        if (covered.count(c)) continue;
        os << "leaf " << c.a.str() << " " << c.b.str() << "\n";
    }
}

inline std::string lamination_to_string(const LeafSystem& L) {
    std::ostringstream os;
    write_lamination(os, L);
    return os.str();
}

inline LeafSystem read_lamination(std::istream& is) {
    LeafSystem L;
    bool have_degree = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "degree") {
            int d = 0;
            if (!(ls >> d)) throw std::invalid_argument("lamination: bad degree line");
            require_degree(d);
            L.degree = d;
            have_degree = true;
        } else if (tok == "leaf") {
            std::string sa, sb;
            if (!(ls >> sa >> sb))
                throw std::invalid_argument("lamination: bad leaf at line " + std::to_string(lineno));
            L.add_chord(Chord(Angle::parse(sa), Angle::parse(sb)));
        } else if (tok == "poly") {
            std::vector<Angle> vs;
            std::string s;
            while (ls >> s) vs.push_back(Angle::parse(s));
            if (vs.size() < 2)
                throw std::invalid_argument("lamination: poly needs >= 2 vertices at line " +
                                            std::to_string(lineno));
            L.add_polygon(ClassPolygon(vs));
        } else {
            throw std::invalid_argument("lamination: unknown item '" + tok + "' at line " +
                                        std::to_string(lineno));
        }
    }
    if (!have_degree) throw std::invalid_argument("lamination: missing 'degree' header");
    return L;
}

inline LeafSystem lamination_from_string(const std::string& text) {
    std::istringstream is(text);
    return read_lamination(is);
}

}  // namespace cubilam
