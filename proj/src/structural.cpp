#include "structural.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace sn {

void SystemStructure::validate() const {
    if (n <= 0) throw DomainError("structure: state count must be positive");
    for (const auto& e : edges) {
        if (e.src < 1 || e.src > n || e.dst < 1 || e.dst > n)
            throw DomainError("structure: edge index out of range 1..n");
    }
    for (const auto& row : c_pattern) {
        if (row.empty()) throw DomainError("structure: empty output row");
        for (int s : row)
            if (s < 1 || s > n) throw DomainError("structure: output index out of range");
    }
}

namespace {

std::vector<std::vector<int>> out_adjacency(const SystemStructure& s) {
    std::vector<std::set<int>> adj(s.n + 1);
    for (const auto& e : s.edges) adj[e.src].insert(e.dst);
    std::vector<std::vector<int>> out(s.n + 1);
    for (int v = 1; v <= s.n; ++v) out[v].assign(adj[v].begin(), adj[v].end());
    return out;
}

} // namespace

SccDecomposition scc_decompose(const SystemStructure& s) {
    s.validate();
    const auto adj = out_adjacency(s);

    // Iterative Tarjan.
    std::vector<int> index(s.n + 1, -1), lowlink(s.n + 1, 0);
    std::vector<bool> on_stack(s.n + 1, false);
    std::vector<int> stack;
    std::vector<std::vector<int>> comps;
    std::vector<int> comp_of(s.n + 1, -1);
    int counter = 0;

    struct Frame { int v; std::size_t next; };
    for (int root = 1; root <= s.n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> call;
        call.push_back({root, 0});
        index[root] = lowlink[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next < adj[f.v].size()) {
                const int w = adj[f.v][f.next++];
                if (index[w] == -1) {
                    index[w] = lowlink[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
                }
            } else {
                if (lowlink[f.v] == index[f.v]) {
                    std::vector<int> comp;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp_of[w] = static_cast<int>(comps.size());
                        comp.push_back(w);
                    } while (w != f.v);
                    std::sort(comp.begin(), comp.end());
                    comps.push_back(std::move(comp));
                }
                const int v = f.v;
                call.pop_back();
                if (!call.empty())
                    lowlink[call.back().v] = std::min(lowlink[call.back().v], lowlink[v]);
            }
        }
    }

    // Canonical order: by smallest member.
    std::vector<int> order(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return comps[a].front() < comps[b].front(); });

    std::vector<int> rank(comps.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);

    SccDecomposition dec;
    dec.components.resize(comps.size());
    dec.parent_flags.assign(comps.size(), true);
    for (std::size_t i = 0; i < comps.size(); ++i)
        dec.components[rank[i]] = comps[i];

    // A parent component has no edge leaving it (self-loops ignored by
    // construction since both endpoints share a component).
    for (const auto& e : s.edges) {
        const int cs = rank[comp_of[e.src]];
        const int cd = rank[comp_of[e.dst]];
        if (cs != cd) dec.parent_flags[cs] = false;
    }
    return dec;
}

namespace {

// Kuhn's augmenting-path matching over columns (sources) in ascending
// order with ascending row preference.  Deterministic by construction;
// the contraction discovery order below depends on it.
struct Matching {
    std::vector<std::vector<int>> col_rows;  // rows adjacent to each column
    std::vector<int> match_row_to_col;       // row -> matched column (0 = free)
    std::vector<int> match_col_to_row;       // column -> matched row (0 = free)
    int size = 0;
};

Matching max_matching(const SystemStructure& s) {
    Matching m;
    std::vector<std::set<int>> rows(s.n + 1);
    for (const auto& e : s.edges) rows[e.src].insert(e.dst);
    m.col_rows.resize(s.n + 1);
    for (int j = 1; j <= s.n; ++j) m.col_rows[j].assign(rows[j].begin(), rows[j].end());
    m.match_row_to_col.assign(s.n + 1, 0);
    m.match_col_to_row.assign(s.n + 1, 0);

    std::vector<bool> seen;
    std::function<bool(int)> try_col = [&](int j) -> bool {
        for (int r : m.col_rows[j]) {
            if (seen[r]) continue;
            seen[r] = true;
            if (m.match_row_to_col[r] == 0 || try_col(m.match_row_to_col[r])) {
                m.match_row_to_col[r] = j;
                m.match_col_to_row[j] = r;
                return true;
            }
        }
        return false;
    };
    for (int j = 1; j <= s.n; ++j) {
        seen.assign(s.n + 1, false);
        if (try_col(j)) ++m.size;
    }
    return m;
}

} // namespace

int structural_rank(const SystemStructure& s) {
    s.validate();
    return max_matching(s).size;
}

ContractionFamily find_contractions(const SystemStructure& s) {
    s.validate();
    const Matching m = max_matching(s);

    ContractionFamily fam;
    fam.deficiency = s.n - m.size;

    // From each unmatched column, collect the columns reachable by
    // alternating paths (column -> adjacent row -> row's matched column).
    // The visited column set C violates Hall's condition: every adjacent
    // row is matched into C, so |N(C)| = |C| - 1.
    for (int c0 = 1; c0 <= s.n; ++c0) {
        if (m.match_col_to_row[c0] != 0) continue;
        std::vector<bool> col_seen(s.n + 1, false), row_seen(s.n + 1, false);
        std::vector<int> queue{c0}, discovered{c0};
        col_seen[c0] = true;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const int j = queue[qi];
            for (int r : m.col_rows[j]) {
                if (row_seen[r]) continue;
                row_seen[r] = true;
                const int j2 = m.match_row_to_col[r];
                if (j2 != 0 && !col_seen[j2]) {
                    col_seen[j2] = true;
                    queue.push_back(j2);
                    discovered.push_back(j2);
                }
            }
        }
        fam.contractions.push_back(std::move(discovered));
    }
    return fam;
}

std::vector<std::vector<int>> equivalence_classes(const SystemStructure& s) {
    std::vector<std::vector<int>> classes;
    const SccDecomposition dec = scc_decompose(s);
    for (std::size_t i = 0; i < dec.components.size(); ++i)
        if (dec.parent_flags[i]) classes.push_back(dec.components[i]);
    for (auto c : find_contractions(s).contractions) {
        std::sort(c.begin(), c.end());
        classes.push_back(std::move(c));
    }
    return classes;
}

bool check_structural_observability(const SystemStructure& s) {
    s.validate();
    if (s.c_pattern.empty()) throw DomainError("no outputs defined");

    // Each parent SCC and each contraction needs its own output: a state in
    // the intersection of two classes cannot serve both with one sensor
    // (the minimum design below still measures four states, not three).
    // So the condition is a system of distinct representatives between the
    // classes and the output rows, decided by bipartite matching.
    const auto classes = equivalence_classes(s);
    std::vector<std::vector<int>> cands(classes.size());  // class -> output rows
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const std::set<int> members(classes[c].begin(), classes[c].end());
        for (std::size_t r = 0; r < s.c_pattern.size(); ++r)
            for (int v : s.c_pattern[r])
                if (members.count(v)) {
                    cands[c].push_back(static_cast<int>(r));
                    break;
                }
    }
    std::vector<int> row_to_class(s.c_pattern.size(), -1);
    std::vector<bool> seen;
    std::function<bool(std::size_t)> try_class = [&](std::size_t c) -> bool {
        for (int r : cands[c]) {
            if (seen[r]) continue;
            seen[r] = true;
            if (row_to_class[r] < 0 ||
                try_class(static_cast<std::size_t>(row_to_class[r]))) {
                row_to_class[r] = static_cast<int>(c);
                return true;
            }
        }
        return false;
    };
    for (std::size_t c = 0; c < classes.size(); ++c) {
        seen.assign(s.c_pattern.size(), false);
        if (!try_class(c)) return false;
    }
    return true;
}

OutputPlacement place_outputs_q_redundant(const SystemStructure& s, int q) {
    s.validate();
    if (q < 0) throw DomainError("Q must be nonnegative");

    // Candidate lists in canonical order: parent SCCs first (ascending
    // index within), then contractions (discovery order within).
    std::vector<std::pair<bool, std::vector<int>>> comps;  // (is_contraction, candidates)
    const SccDecomposition dec = scc_decompose(s);
    for (std::size_t i = 0; i < dec.components.size(); ++i)
        if (dec.parent_flags[i]) comps.emplace_back(false, dec.components[i]);
    for (const auto& c : find_contractions(s).contractions)
        comps.emplace_back(true, c);

    OutputPlacement placement;
    placement.q = q;
    std::set<int> used;
    for (std::size_t id = 0; id < comps.size(); ++id) {
        const auto& [is_contr, candidates] = comps[id];
        if (static_cast<int>(candidates.size()) < q + 1)
            throw InsufficientComponentSize(
                "component has fewer than Q+1 states");
        OutputPlacement::Assignment a;
        a.component_id = static_cast<int>(id);
        a.is_contraction = is_contr;
        for (int v : candidates) {
            if (static_cast<int>(a.states.size()) == q + 1) break;
            if (used.count(v)) continue;
            a.states.push_back(v);
            used.insert(v);
        }
        if (static_cast<int>(a.states.size()) < q + 1)
            throw InsufficientComponentSize(
                "component candidates exhausted by earlier placements");
        placement.assignments.push_back(std::move(a));
    }
    return placement;
}

std::vector<int> OutputPlacement::placed() const {
    std::vector<int> all;
    for (const auto& a : assignments)
        all.insert(all.end(), a.states.begin(), a.states.end());
    return all;
}

SystemStructure with_outputs(const SystemStructure& s, const std::vector<int>& states) {
    SystemStructure out = s;
    out.c_pattern.clear();
    for (int v : states) out.c_pattern.push_back({v});
    return out;
}

} // namespace sn
