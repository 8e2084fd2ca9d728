#pragma once

#include <vector>

namespace eioutrack {

// Fixed-length appearance feature. Run-wide dimension, non-zero norm.
using Embedding = std::vector<double>;

double norm(const Embedding& v);

// Scales v to unit norm. Throws std::domain_error on a zero vector.
Embedding normalized(const Embedding& v);

// 1 - cosine similarity, in [0,2]; lower means more alike. Throws
// std::domain_error on dimension mismatch or zero-norm input.
double cosine_cost(const Embedding& a, const Embedding& b);

// Exponential moving average of a track feature against a new observation,
// alpha*current + (1-alpha)*observed, renormalized to unit norm.
Embedding update_track_feature(const Embedding& current, const Embedding& observed, double alpha);

}  // namespace eioutrack
