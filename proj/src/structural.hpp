#pragma once

#include <vector>

#include "errors.hpp"

namespace sn {

// Structural (sparsity-pattern) analysis of the system digraph: SCC
// decomposition, structural rank, contractions, observational-equivalence
// classes and Q-redundant output placement.

struct StructEdge {
    int src = 0;            // 1-indexed; edge j -> i means entry A_ij is nonzero
    int dst = 0;
    double weight = 0.0;    // optional numeric value (0 when structure-only)
    bool has_weight = false;
};

struct SystemStructure {
    int n = 0;
    std::vector<StructEdge> edges;
    std::vector<std::vector<int>> c_pattern;  // output rows: measured state indices

    void validate() const;  // throws DomainError on bad indices / empty rows
};

struct SccDecomposition {
    // Components sorted internally (ascending state index) and ordered by
    // smallest member.  parent_flags[i] is true iff component i has no
    // outgoing edge into another component (self-loops do not count).
    std::vector<std::vector<int>> components;
    std::vector<bool> parent_flags;
};

struct ContractionFamily {
    // One Hall-violating set per unit of structural rank deficiency.  States
    // inside each set are kept in alternating-path discovery order, which is
    // the canonical order used downstream by output placement.
    std::vector<std::vector<int>> contractions;
    int deficiency = 0;
};

struct OutputPlacement {
    struct Assignment {
        int component_id = 0;      // index into the ordered component list
        bool is_contraction = false;
        std::vector<int> states;   // Q+1 chosen states, in choice order
    };
    std::vector<Assignment> assignments;
    int q = 0;

    std::vector<int> placed() const;  // all chosen states, assignment order
};

SccDecomposition scc_decompose(const SystemStructure& s);

// Maximum bipartite matching size (columns = source nodes, rows =
// destination nodes, edge (j,i) iff j->i in the pattern).
int structural_rank(const SystemStructure& s);

ContractionFamily find_contractions(const SystemStructure& s);

// Output-equivalence classes: every parent SCC and every contraction is
// one class.  Classes may overlap; no partition is forced.
std::vector<std::vector<int>> equivalence_classes(const SystemStructure& s);

// Sufficient-condition check only: true iff a distinct output row can be
// assigned to every parent SCC and every contraction (a state shared by two
// classes cannot serve both with one sensor).  This is NOT an exact
// structural-observability test (the condition is sufficient, not
// necessary).
bool check_structural_observability(const SystemStructure& s);

// Deterministic Q-redundant placement: components are visited parents-first
// (ordered by smallest member), then contractions; each component receives
// Q+1 states not placed before, taken in the component's canonical order
// (ascending index for SCCs, discovery order for contractions).  Throws
// InsufficientComponentSize when a quota cannot be met.
OutputPlacement place_outputs_q_redundant(const SystemStructure& s, int q);

// Convenience: structure with the placement applied as single-state outputs.
SystemStructure with_outputs(const SystemStructure& s, const std::vector<int>& states);

} // namespace sn
