#pragma once

// Named, fully-built constructions: standard contact space, unit-sphere
// Liouville restrictions with the circle fibration over S^2, conformally
// deformed sphere forms, standard contactifications of exact symplectic
// planes, and torus start points for the dynamics.

#include "reebflow/reduction.hpp"
#include "reebflow/symplectization.hpp"

namespace reebflow {

struct CatalogError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ambient R^{2n} data for sphere entries; dynamics integrates here so
// orbits can wander across chart boundaries.
struct AmbientBlock {
    Chart chart;             // (q1, p1, ..., qn, pn)
    KForm liouville;         // (1/2) sum(q dp - p dq)
    KForm omega0;            // sum dq ^ dp
    VectorField field;       // the entry's flow generator
    ScalarField constraint;  // |z|^2 - 1
    VectorField euler;       // (1/2) sum(q dq + p dp)
    HomogeneousModel model;  // scaling z -> sqrt(s) z
    SmoothMap embedding;     // graph chart -> ambient
};

struct CatalogEntry {
    std::string name;
    std::string title;
    std::vector<std::string> description;

    Chart chart;          // working chart (graph patch for spheres)
    ContactForm contact;  // verified on construction

    std::optional<VectorField> reeb_closed;        // closed-form chart Reeb field
    std::optional<ScalarField> conformal_factor;   // deformed entries: 1/F_{a,b}
    std::optional<ScalarField> big_f;              // F_{a,b} restricted to the chart
    std::optional<AmbientBlock> ambient;
    std::optional<Fibration> fibration;            // hopf:2 and contactifications
    std::optional<ScalarField> trivialization;     // g on (alpha, beta, tau)
    std::optional<Contactification> contactification;
    std::optional<Point> start_point;              // torus-point entries
    std::optional<double> hbar;                    // known minimal period / 2 pi
};

// Parses names like "darboux:2", "hopf:3", "deformed-hopf:1,2",
// "std-contactification:pdq", "torus-point:0.5,0".
CatalogEntry build(const std::string& name);

// template name -> one-line description, for `catalog list`
std::vector<std::pair<std::string, std::string>> catalog_templates();

// entries the property suites sweep over
std::vector<std::string> catalog_default_instances();

}  // namespace reebflow
