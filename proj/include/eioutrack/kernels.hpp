#pragma once

#include <vector>

#include <eioutrack/appearance.hpp>
#include <eioutrack/geometry.hpp>
#include <eioutrack/matrix.hpp>

namespace eioutrack {

// Fuses one appearance/geometry cost pair: the appearance cost is halved when
// both costs pass their gates and forced to the maximal value 1 otherwise;
// the entry is the minimum of the gated appearance cost and the geometry cost.
double gated_fusion_cost(double c_app, double c_eiou, double tau_app, double tau_eiou);

// Pairwise 1 - eiou(row_box, col_box, e). OpenMP-parallel when built with it.
Matrix eiou_cost_matrix(const std::vector<BBox>& row_boxes, const std::vector<BBox>& col_boxes,
                        double e);

// First-stage fused cost over all (row, col) pairs. A null feature or
// embedding pointer degrades that pair to geometry only. OpenMP-parallel.
Matrix fused_cost_matrix(const std::vector<BBox>& row_boxes,
                         const std::vector<const Embedding*>& row_features,
                         const std::vector<BBox>& col_boxes,
                         const std::vector<const Embedding*>& col_embeddings, double e,
                         double tau_app, double tau_eiou);

namespace serial {

// Single-threaded reference kernels. Kept for tests and the kernel benchmark;
// results are bit-identical to the parallel versions.
Matrix eiou_cost_matrix(const std::vector<BBox>& row_boxes, const std::vector<BBox>& col_boxes,
                        double e);
Matrix fused_cost_matrix(const std::vector<BBox>& row_boxes,
                         const std::vector<const Embedding*>& row_features,
                         const std::vector<BBox>& col_boxes,
                         const std::vector<const Embedding*>& col_embeddings, double e,
                         double tau_app, double tau_eiou);

}  // namespace serial

}  // namespace eioutrack
