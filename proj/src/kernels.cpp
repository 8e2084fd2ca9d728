#include <eioutrack/kernels.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace eioutrack {

namespace {

void check_boxes(const std::vector<BBox>& boxes, const char* side) {
    for (const BBox& b : boxes) {
        if (!valid_box(b)) {
            throw std::domain_error(std::string("cost matrix: invalid ") + side + " box");
        }
    }
}

std::size_t check_embeddings(const std::vector<const Embedding*>& embs, std::size_t count,
                             const char* side) {
    if (embs.size() != count) {
        throw std::invalid_argument(std::string("cost matrix: ") + side +
                                    " feature list length mismatch");
    }
    std::size_t dim = 0;
    for (const Embedding* e : embs) {
        if (e == nullptr) {
            continue;
        }
        if (dim == 0) {
            dim = e->size();
        }
        if (e->size() != dim || e->empty()) {
            throw std::domain_error("cost matrix: embedding dimension mismatch");
        }
        if (!(norm(*e) > 0.0)) {
            throw std::domain_error("cost matrix: zero-norm embedding");
        }
    }
    return dim;
}

// Non-throwing inner-loop math; inputs validated before the parallel region.
double pair_cosine_cost(const Embedding& a, const Embedding& b) {
    double dot = 0.0;
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        sa += a[i] * a[i];
        sb += b[i] * b[i];
    }
    return std::clamp(1.0 - dot / (std::sqrt(sa) * std::sqrt(sb)), 0.0, 2.0);
}

std::vector<BBox> expand_all(const std::vector<BBox>& boxes, double e) {
    std::vector<BBox> out;
    out.reserve(boxes.size());
    for (const BBox& b : boxes) {
        out.push_back(expand(b, e));
    }
    return out;
}

}  // namespace

double gated_fusion_cost(double c_app, double c_eiou, double tau_app, double tau_eiou) {
    const double c_gated = (c_app > tau_app || c_eiou > tau_eiou) ? 1.0 : 0.5 * c_app;
    return std::min(c_gated, c_eiou);
}

Matrix eiou_cost_matrix(const std::vector<BBox>& row_boxes, const std::vector<BBox>& col_boxes,
                        double e) {
    check_boxes(row_boxes, "row");
    check_boxes(col_boxes, "column");
    const std::vector<BBox> rows = expand_all(row_boxes, e);
    const std::vector<BBox> cols = expand_all(col_boxes, e);

    Matrix out(rows.size(), cols.size());
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(rows.size() * cols.size());
#pragma omp parallel for schedule(static) if (total >= 4096)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
        const std::size_t r = static_cast<std::size_t>(idx) / cols.size();
        const std::size_t c = static_cast<std::size_t>(idx) % cols.size();
        out(r, c) = 1.0 - iou(rows[r], cols[c]);
    }
    return out;
}

Matrix fused_cost_matrix(const std::vector<BBox>& row_boxes,
                         const std::vector<const Embedding*>& row_features,
                         const std::vector<BBox>& col_boxes,
                         const std::vector<const Embedding*>& col_embeddings, double e,
                         double tau_app, double tau_eiou) {
    check_boxes(row_boxes, "row");
    check_boxes(col_boxes, "column");
    const std::size_t row_dim = check_embeddings(row_features, row_boxes.size(), "row");
    const std::size_t col_dim = check_embeddings(col_embeddings, col_boxes.size(), "column");
    if (row_dim != 0 && col_dim != 0 && row_dim != col_dim) {
        throw std::domain_error("cost matrix: embedding dimension mismatch");
    }
    const std::vector<BBox> rows = expand_all(row_boxes, e);
    const std::vector<BBox> cols = expand_all(col_boxes, e);

    Matrix out(rows.size(), cols.size());
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(rows.size() * cols.size());
#pragma omp parallel for schedule(static) if (total >= 1024)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
        const std::size_t r = static_cast<std::size_t>(idx) / cols.size();
        const std::size_t c = static_cast<std::size_t>(idx) % cols.size();
        const double c_eiou = 1.0 - iou(rows[r], cols[c]);
        double c_app = 2.0;
        bool have_app = row_features[r] != nullptr && col_embeddings[c] != nullptr;
        if (have_app) {
            c_app = pair_cosine_cost(*row_features[r], *col_embeddings[c]);
        }
        out(r, c) = have_app ? gated_fusion_cost(c_app, c_eiou, tau_app, tau_eiou)
                             : std::min(1.0, c_eiou);
    }
    return out;
}

namespace serial {

Matrix eiou_cost_matrix(const std::vector<BBox>& row_boxes, const std::vector<BBox>& col_boxes,
                        double e) {
    check_boxes(row_boxes, "row");
    check_boxes(col_boxes, "column");
    Matrix out(row_boxes.size(), col_boxes.size());
    for (std::size_t r = 0; r < row_boxes.size(); ++r) {
        for (std::size_t c = 0; c < col_boxes.size(); ++c) {
            out(r, c) = 1.0 - eiou(row_boxes[r], col_boxes[c], e);
        }
    }
    return out;
}

Matrix fused_cost_matrix(const std::vector<BBox>& row_boxes,
                         const std::vector<const Embedding*>& row_features,
                         const std::vector<BBox>& col_boxes,
                         const std::vector<const Embedding*>& col_embeddings, double e,
                         double tau_app, double tau_eiou) {
    check_boxes(row_boxes, "row");
    check_boxes(col_boxes, "column");
    const std::size_t row_dim = check_embeddings(row_features, row_boxes.size(), "row");
    const std::size_t col_dim = check_embeddings(col_embeddings, col_boxes.size(), "column");
    if (row_dim != 0 && col_dim != 0 && row_dim != col_dim) {
        throw std::domain_error("cost matrix: embedding dimension mismatch");
    }
    Matrix out(row_boxes.size(), col_boxes.size());
    for (std::size_t r = 0; r < row_boxes.size(); ++r) {
        for (std::size_t c = 0; c < col_boxes.size(); ++c) {
            const double c_eiou = 1.0 - eiou(row_boxes[r], col_boxes[c], e);
            if (row_features[r] != nullptr && col_embeddings[c] != nullptr) {
                const double c_app = pair_cosine_cost(*row_features[r], *col_embeddings[c]);
                out(r, c) = gated_fusion_cost(c_app, c_eiou, tau_app, tau_eiou);
            } else {
                out(r, c) = std::min(1.0, c_eiou);
            }
        }
    }
    return out;
}

}  // namespace serial

}  // namespace eioutrack
