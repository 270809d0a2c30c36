#pragma once

// Closed surfaces from polygon gluing words, their classification, and the
// unoriented cobordism ring as a polynomial algebra over Z/2.

#include <mod2/error.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mod2 {

struct SignedEdge {
    std::string label;
    int exponent = 1;  // +1 or -1
    friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

/// Polygons whose edges are identified in pairs by label.
struct GluingWord {
    std::vector<std::vector<SignedEdge>> polygons;
    friend bool operator==(const GluingWord&, const GluingWord&) = default;
};

/// Grammar: polygons separated by ';', edges by whitespace, each edge a
/// label of letters/digits/underscores with an optional trailing '-' for
/// the inverse direction. Example: "a b a- b-".
inline GluingWord parse_gluing_word(std::string_view text) {
    GluingWord word;
    std::map<std::string, int> counts;
    std::size_t start = 0;
    while (true) {
        const std::size_t stop = text.find(';', start);
        const std::string_view chunk = text.substr(start, stop == std::string_view::npos ? text.npos : stop - start);
        std::vector<SignedEdge> polygon;
        std::size_t i = 0;
        while (i < chunk.size()) {
            if (std::isspace(static_cast<unsigned char>(chunk[i]))) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < chunk.size() && !std::isspace(static_cast<unsigned char>(chunk[j]))) ++j;
            std::string token(chunk.substr(i, j - i));
            SignedEdge edge;
            if (token.size() > 1 && token.back() == '-') {
                edge.exponent = -1;
                token.pop_back();
            }
            const bool ok = !token.empty() && std::all_of(token.begin(), token.end(), [](char c) {
                return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
            });
            if (!ok) throw Error("invalid edge token '" + std::string(chunk.substr(i, j - i)) + "'");
            edge.label = token;
            ++counts[token];
            polygon.push_back(std::move(edge));
            i = j;
        }
        if (polygon.empty()) throw Error("empty polygon");
        word.polygons.push_back(std::move(polygon));
        if (stop == std::string_view::npos) break;
        start = stop + 1;
    }
    for (const auto& [label, n] : counts)
        if (n != 2) throw Error("surface not closed: label '" + label + "' occurs " + std::to_string(n) + " times");
    return word;
}

inline std::string render_gluing_word(const GluingWord& word) {
    std::string out;
    for (std::size_t p = 0; p < word.polygons.size(); ++p) {
        if (p) out += "; ";
        for (std::size_t e = 0; e < word.polygons[p].size(); ++e) {
            if (e) out += ' ';
            out += word.polygons[p][e].label;
            if (word.polygons[p][e].exponent < 0) out += '-';
        }
    }
    return out;
}

enum class SurfaceKind { sphere, orientable_genus, nonorientable_crosscaps };

struct SurfaceClass {
    SurfaceKind kind = SurfaceKind::sphere;
    int genus = 0;      // orientable surfaces
    int crosscaps = 0;  // non-orientable surfaces

    std::string name() const {
        switch (kind) {
        case SurfaceKind::sphere: return "sphere";
        case SurfaceKind::orientable_genus: return genus == 1 ? "torus" : "genus-" + std::to_string(genus) + " surface";
        case SurfaceKind::nonorientable_crosscaps:
            if (crosscaps == 1) return "projective plane";
            if (crosscaps == 2) return "Klein bottle";
            return "connected sum of " + std::to_string(crosscaps) + " projective planes";
        }
        return {};
    }
    friend bool operator==(const SurfaceClass&, const SurfaceClass&) = default;
};

struct SurfaceInvariants {
    int vertices = 0;
    int edges = 0;
    int faces = 0;
    int euler_characteristic = 0;
    bool orientable = true;
    SurfaceClass classification;
};

/// Classification of a closed connected surface from (orientable, chi).
inline SurfaceClass classify(bool orientable, int chi) {
    if (chi > 2) throw Error("Euler characteristic of a closed connected surface is at most 2");
    if (orientable) {
        if ((2 - chi) % 2 != 0) throw Error("orientable surface must have even Euler characteristic");
        const int g = (2 - chi) / 2;
        return {g == 0 ? SurfaceKind::sphere : SurfaceKind::orientable_genus, g, 0};
    }
    if (chi > 1) throw Error("non-orientable surface must have Euler characteristic at most 1");
    return {SurfaceKind::nonorientable_crosscaps, 0, 2 - chi};
}

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

struct EdgeSlot {
    int polygon;
    int position;
    int exponent;
};

} // namespace detail

/// V by corner orbits under the edge identifications, E = number of
/// labels, F = number of polygons; orientable iff the polygons can be
/// flipped so every label appears once with each exponent.
inline SurfaceInvariants surface_invariants(const GluingWord& word) {
    std::map<std::string, std::vector<detail::EdgeSlot>> slots;
    std::vector<int> offset;
    int corners = 0;
    for (std::size_t p = 0; p < word.polygons.size(); ++p) {
        offset.push_back(corners);
        const auto& poly = word.polygons[p];
        if (poly.empty()) throw Error("empty polygon");
        for (std::size_t e = 0; e < poly.size(); ++e)
            slots[poly[e].label].push_back({static_cast<int>(p), static_cast<int>(e), poly[e].exponent});
        corners += static_cast<int>(poly.size());
    }
    for (const auto& [label, list] : slots)
        if (list.size() != 2) throw Error("surface not closed: label '" + label + "' does not occur twice");

    auto corner = [&](int p, int i) {
        const auto n = static_cast<int>(word.polygons[static_cast<std::size_t>(p)].size());
        return offset[static_cast<std::size_t>(p)] + ((i % n) + n) % n;
    };
    // an edge at position i runs from corner i to corner i+1 of its polygon
    auto tail = [&](const detail::EdgeSlot& s) {
        return s.exponent > 0 ? corner(s.polygon, s.position) : corner(s.polygon, s.position + 1);
    };
    auto head = [&](const detail::EdgeSlot& s) {
        return s.exponent > 0 ? corner(s.polygon, s.position + 1) : corner(s.polygon, s.position);
    };

    detail::UnionFind corner_sets(static_cast<std::size_t>(corners));
    detail::UnionFind pieces(word.polygons.size());
    // orientation constraints: flip[p] xor flip[q] == want
    std::vector<std::vector<std::pair<int, int>>> constraints(word.polygons.size());
    bool orientable = true;
    for (const auto& [label, list] : slots) {
        const auto& a = list[0];
        const auto& b = list[1];
        corner_sets.unite(tail(a), tail(b));
        corner_sets.unite(head(a), head(b));
        pieces.unite(a.polygon, b.polygon);
        const int want = a.exponent == b.exponent ? 1 : 0;
        if (a.polygon == b.polygon) {
            if (want) orientable = false;
            continue;
        }
        constraints[static_cast<std::size_t>(a.polygon)].emplace_back(b.polygon, want);
        constraints[static_cast<std::size_t>(b.polygon)].emplace_back(a.polygon, want);
    }
    std::set<int> components;
    for (std::size_t p = 0; p < word.polygons.size(); ++p) components.insert(pieces.find(static_cast<int>(p)));
    if (components.size() != 1) throw Error("surface is not connected");

    std::vector<int> flip(word.polygons.size(), -1);
    for (std::size_t s = 0; s < flip.size() && orientable; ++s) {
        if (flip[s] >= 0) continue;
        flip[s] = 0;
        std::vector<int> stack{static_cast<int>(s)};
        while (!stack.empty() && orientable) {
            const int p = stack.back();
            stack.pop_back();
            for (const auto& [q, want] : constraints[static_cast<std::size_t>(p)]) {
                const int need = flip[static_cast<std::size_t>(p)] ^ want;
                auto& cur = flip[static_cast<std::size_t>(q)];
                if (cur < 0) {
                    cur = need;
                    stack.push_back(q);
                } else if (cur != need) {
                    orientable = false;
                }
            }
        }
    }

    SurfaceInvariants inv;
    std::set<int> roots;
    for (int c = 0; c < corners; ++c) roots.insert(corner_sets.find(c));
    inv.vertices = static_cast<int>(roots.size());
    inv.edges = static_cast<int>(slots.size());
    inv.faces = static_cast<int>(word.polygons.size());
    inv.euler_characteristic = inv.vertices - inv.edges + inv.faces;
    inv.orientable = orientable;
    inv.classification = classify(orientable, inv.euler_characteristic);
    return inv;
}

/// One-polygon normal form: "a a-" for the sphere, a1 b1 a1- b1- ... for
/// genus g, a1 a1 ... ak ak for k crosscaps.
inline GluingWord normal_form_word(const SurfaceClass& cls) {
    GluingWord word;
    std::vector<SignedEdge> poly;
    switch (cls.kind) {
    case SurfaceKind::sphere: poly = {{"a", 1}, {"a", -1}}; break;
    case SurfaceKind::orientable_genus:
        for (int i = 1; i <= cls.genus; ++i) {
            const std::string a = "a" + std::to_string(i), b = "b" + std::to_string(i);
            poly.insert(poly.end(), {{a, 1}, {b, 1}, {a, -1}, {b, -1}});
        }
        break;
    case SurfaceKind::nonorientable_crosscaps:
        for (int i = 1; i <= cls.crosscaps; ++i) {
            const std::string a = "a" + std::to_string(i);
            poly.insert(poly.end(), {{a, 1}, {a, 1}});
        }
        break;
    }
    word.polygons.push_back(std::move(poly));
    return word;
}

/// Connected sum on invariants: chi adds minus 2, orientable iff both are.
/// Cell counts are those of the normal-form word of the result.
inline SurfaceInvariants connected_sum(const SurfaceInvariants& a, const SurfaceInvariants& b) {
    const int chi = a.euler_characteristic + b.euler_characteristic - 2;
    return surface_invariants(normal_form_word(classify(a.orientable && b.orientable, chi)));
}

struct ZeroDimManifold {
    int n_points = 0;
};

enum class ZeroDimClass { even, odd };
enum class CobordismClass1 { nullbordant };
enum class CobordismClass2 { nullbordant, rp2_class };

inline ZeroDimClass class_zero_dim(ZeroDimManifold m) {
    if (m.n_points < 0) throw Error("point count must be non-negative");
    return m.n_points % 2 == 0 ? ZeroDimClass::even : ZeroDimClass::odd;
}

inline CobordismClass1 class_one_dim(int n_circles) {
    if (n_circles < 0) throw Error("circle count must be non-negative");
    return CobordismClass1::nullbordant;
}

inline CobordismClass2 class_surface(const SurfaceInvariants& inv) {
    return inv.euler_characteristic % 2 == 0 ? CobordismClass2::nullbordant : CobordismClass2::rp2_class;
}

/// Degrees k >= 2 with k + 1 not a power of two.
inline bool is_generator_degree(int k) {
    if (k < 2) return false;
    const auto v = static_cast<unsigned>(k) + 1u;
    return (v & (v - 1u)) != 0u;
}

inline std::vector<int> generators_up_to(int n) {
    if (n < 0) throw Error("degree bound must be non-negative");
    std::vector<int> out;
    for (int k = 2; k <= n; ++k)
        if (is_generator_degree(k)) out.push_back(k);
    return out;
}

/// Sorted generator degrees; {2, 2, 5} is x2^2*x5 and {} is 1.
using Monomial = std::vector<int>;

inline int monomial_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

inline std::string render_monomial(const Monomial& m) {
    if (m.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < m.size();) {
        std::size_t j = i;
        while (j < m.size() && m[j] == m[i]) ++j;
        if (!out.empty()) out += '*';
        out += "x" + std::to_string(m[i]);
        if (j - i > 1) out += "^" + std::to_string(j - i);
        i = j;
    }
    return out;
}

/// Element of the unoriented cobordism ring: a set of monomials, each with
/// coefficient 1 in Z/2.
class CobordismElement {
public:
    CobordismElement() = default;

    static CobordismElement zero() { return {}; }
    static CobordismElement one() { return from_monomials({Monomial{}}); }
    static CobordismElement generator(int k) { return from_monomials({Monomial{k}}); }

    /// Repeated monomials cancel in pairs.
    static CobordismElement from_monomials(const std::vector<Monomial>& monomials) {
        CobordismElement e;
        for (Monomial m : monomials) {
            check(m);
            std::sort(m.begin(), m.end());
            e.toggle(std::move(m));
        }
        return e;
    }

    const std::set<Monomial>& monomials() const { return monomials_; }
    bool is_zero() const { return monomials_.empty(); }

    friend CobordismElement ring_add(const CobordismElement& a, const CobordismElement& b) {
        CobordismElement out = a;
        for (const auto& m : b.monomials_) out.toggle(m);
        return out;
    }

    friend CobordismElement ring_mul(const CobordismElement& a, const CobordismElement& b) {
        CobordismElement out;
        for (const auto& ma : a.monomials_) {
            check(ma);
            for (const auto& mb : b.monomials_) {
                check(mb);
                Monomial m;
                m.reserve(ma.size() + mb.size());
                std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
                out.toggle(std::move(m));
            }
        }
        return out;
    }

    friend CobordismElement operator+(const CobordismElement& a, const CobordismElement& b) { return ring_add(a, b); }
    friend CobordismElement operator*(const CobordismElement& a, const CobordismElement& b) { return ring_mul(a, b); }
    friend bool operator==(const CobordismElement&, const CobordismElement&) = default;

    /// "0", or monomials by ascending degree joined by " + ".
    std::string to_string() const {
        if (monomials_.empty()) return "0";
        std::vector<Monomial> sorted(monomials_.begin(), monomials_.end());
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const Monomial& l, const Monomial& r) { return monomial_degree(l) < monomial_degree(r); });
        std::string out;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (i) out += " + ";
            out += render_monomial(sorted[i]);
        }
        return out;
    }

private:
    static void check(const Monomial& m) {
        for (int k : m)
            if (!is_generator_degree(k)) throw Error("not a generator: x" + std::to_string(k));
    }
    void toggle(Monomial m) {
        auto [it, inserted] = monomials_.insert(std::move(m));
        if (!inserted) monomials_.erase(it);
    }

    std::set<Monomial> monomials_;
};

namespace detail {

/// Recursive-descent parser for sums and products of 0, 1, xK, xK^n and
/// parenthesized expressions.
class ElementParser {
public:
    explicit ElementParser(std::string_view text) : text_(text) {}

    CobordismElement parse() {
        auto e = sum();
        skip();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    CobordismElement sum() {
        auto e = product();
        while (accept('+')) e = ring_add(e, product());
        return e;
    }
    CobordismElement product() {
        auto e = power();
        while (accept('*')) e = ring_mul(e, power());
        return e;
    }
    CobordismElement power() {
        auto base = atom();
        if (!accept('^')) return base;
        const int n = number();
        auto out = CobordismElement::one();
        for (int i = 0; i < n; ++i) out = ring_mul(out, base);
        return out;
    }
    CobordismElement atom() {
        skip();
        if (accept('(')) {
            auto e = sum();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'x' || text_[pos_] == 'X')) {
            ++pos_;
            return CobordismElement::generator(number());
        }
        const int n = number();
        if (n == 0) return CobordismElement::zero();
        if (n == 1) return CobordismElement::one();
        fail("only 0 and 1 are constants");
        return {};
    }
    int number() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_ || pos_ - start > 6) fail("expected a number");
        return std::stoi(std::string(text_.substr(start, pos_ - start)));
    }
    bool accept(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw Error("bad expression at column " + std::to_string(pos_ + 1) + ": " + what);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline CobordismElement parse_element(std::string_view text) { return detail::ElementParser(text).parse(); }

/// Number of monomials of total degree `dim` (partitions into generator
/// degrees), by dynamic programming over the allowed parts.
inline std::uint64_t count_monomials(int dim) {
    if (dim < 0) throw Error("dimension must be non-negative");
    std::vector<std::uint64_t> ways(static_cast<std::size_t>(dim) + 1, 0);
    ways[0] = 1;
    for (int part : generators_up_to(dim))
        for (int d = part; d <= dim; ++d) ways[static_cast<std::size_t>(d)] += ways[static_cast<std::size_t>(d - part)];
    return ways[static_cast<std::size_t>(dim)];
}

/// Number of cobordism classes in dimension `dim`: 2^(monomials of that degree).
inline std::uint64_t count_classes(int dim) {
    const std::uint64_t p = count_monomials(dim);
    if (p >= 64) throw Error("class count exceeds 64-bit range");
    return std::uint64_t{1} << p;
}

/// Monomials of total degree `dim`, ascending lexicographically.
inline std::vector<Monomial> monomials_of_degree(int dim) {
    if (dim < 0) throw Error("dimension must be non-negative");
    const auto parts = generators_up_to(dim);
    std::vector<Monomial> out;
    Monomial cur;
    auto rec = [&](auto&& self, std::size_t from, int left) -> void {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = from; i < parts.size() && parts[i] <= left; ++i) {
            cur.push_back(parts[i]);
            self(self, i, left - parts[i]);
            cur.pop_back();
        }
    };
    rec(rec, 0, dim);
    std::sort(out.begin(), out.end());
    return out;
}

inline CobordismElement surface_to_element(CobordismClass2 c) {
    return c == CobordismClass2::nullbordant ? CobordismElement::zero() : CobordismElement::generator(2);
}

inline std::string to_string(ZeroDimClass c) { return c == ZeroDimClass::even ? "even" : "odd"; }
inline std::string to_string(CobordismClass1) { return "nullbordant"; }
inline std::string to_string(CobordismClass2 c) { return c == CobordismClass2::nullbordant ? "nullbordant" : "rp2_class"; }

} // namespace mod2
