#include <eioutrack/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include <eioutrack/assignment.hpp>

namespace eioutrack {

namespace {

constexpr double kForbidden = 1.0e6;  // gates invalid pairs out of a matching

void check_unique_ids(const FrameLabels& labels, const char* side) {
    for (const auto& [frame, boxes] : labels) {
        std::set<int> seen;
        for (const LabeledBox& lb : boxes) {
            if (!seen.insert(lb.id).second) {
                throw std::invalid_argument(std::string("metrics: duplicate ") + side +
                                            " id in frame " + std::to_string(frame));
            }
        }
    }
}

std::vector<int> merged_frames(const LabeledFrameSet& data) {
    std::set<int> frames;
    for (const auto& [f, _] : data.ground_truth) {
        frames.insert(f);
    }
    for (const auto& [f, _] : data.predictions) {
        frames.insert(f);
    }
    return {frames.begin(), frames.end()};
}

const std::vector<LabeledBox>& labels_at(const FrameLabels& labels, int frame) {
    static const std::vector<LabeledBox> empty;
    const auto it = labels.find(frame);
    return it == labels.end() ? empty : it->second;
}

// Dense index per identity, in order of first appearance.
class IdIndex {
public:
    int lookup(int id) {
        const auto [it, inserted] = index_.try_emplace(id, static_cast<int>(index_.size()));
        (void)inserted;
        return it->second;
    }
    std::size_t size() const { return index_.size(); }

private:
    std::unordered_map<int, int> index_;
};

}  // namespace

ClearResult clear_metrics(const LabeledFrameSet& data, double iou_threshold) {
    if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
        throw std::invalid_argument("clear_metrics: iou_threshold must be in (0,1)");
    }
    check_unique_ids(data.ground_truth, "ground-truth");
    check_unique_ids(data.predictions, "prediction");

    ClearResult res;
    std::map<int, int> correspondence;  // gt id -> pred id carried across frames
    std::map<int, int> last_matched;    // gt id -> pred id of the last match ever
    struct GtStatus {
        bool matched_before = false;
        bool in_gap = false;
    };
    std::map<int, GtStatus> status;

    for (int frame : merged_frames(data)) {
        const auto& gt = labels_at(data.ground_truth, frame);
        const auto& pred = labels_at(data.predictions, frame);
        res.ground_truth_total += static_cast<int>(gt.size());

        std::map<int, std::size_t> gt_pos;
        std::map<int, std::size_t> pred_pos;
        for (std::size_t i = 0; i < gt.size(); ++i) {
            gt_pos[gt[i].id] = i;
        }
        for (std::size_t i = 0; i < pred.size(); ++i) {
            pred_pos[pred[i].id] = i;
        }
        std::vector<char> gt_done(gt.size(), 0);
        std::vector<char> pred_done(pred.size(), 0);

        const auto commit = [&](std::size_t gi, std::size_t pi) {
            gt_done[gi] = 1;
            pred_done[pi] = 1;
            const int g = gt[gi].id;
            const int p = pred[pi].id;
            const auto last = last_matched.find(g);
            if (last != last_matched.end() && last->second != p) {
                ++res.id_switches;
            }
            last_matched[g] = p;
            correspondence[g] = p;
        };

        // Keep the previous frame's correspondences that still hold up.
        for (const auto& [g, p] : correspondence) {
            const auto gi = gt_pos.find(g);
            const auto pi = pred_pos.find(p);
            if (gi == gt_pos.end() || pi == pred_pos.end()) {
                continue;
            }
            if (gt_done[gi->second] || pred_done[pi->second]) {
                continue;
            }
            if (iou(gt[gi->second].box, pred[pi->second].box) >= iou_threshold) {
                commit(gi->second, pi->second);
            }
        }

        // Min-cost matching over what's left, gated at the IoU threshold.
        std::vector<std::size_t> open_gt;
        std::vector<std::size_t> open_pred;
        for (std::size_t i = 0; i < gt.size(); ++i) {
            if (!gt_done[i]) {
                open_gt.push_back(i);
            }
        }
        for (std::size_t i = 0; i < pred.size(); ++i) {
            if (!pred_done[i]) {
                open_pred.push_back(i);
            }
        }
        if (!open_gt.empty() && !open_pred.empty()) {
            Matrix costs(open_gt.size(), open_pred.size());
            for (std::size_t r = 0; r < open_gt.size(); ++r) {
                for (std::size_t c = 0; c < open_pred.size(); ++c) {
                    const double overlap = iou(gt[open_gt[r]].box, pred[open_pred[c]].box);
                    costs(r, c) = overlap >= iou_threshold ? 1.0 - overlap : kForbidden;
                }
            }
            for (const auto& [r, c] : solve(costs, 1.0).matches) {
                commit(open_gt[r], open_pred[c]);
            }
        }

        for (std::size_t i = 0; i < gt.size(); ++i) {
            GtStatus& st = status[gt[i].id];
            if (gt_done[i]) {
                if (st.matched_before && st.in_gap) {
                    ++res.fragmentations;
                }
                st.matched_before = true;
                st.in_gap = false;
            } else {
                ++res.false_negatives;
                if (st.matched_before) {
                    st.in_gap = true;
                }
            }
        }
        for (std::size_t i = 0; i < pred.size(); ++i) {
            if (!pred_done[i]) {
                ++res.false_positives;
            }
        }
    }

    const int errors = res.false_positives + res.false_negatives + res.id_switches;
    res.mota = res.ground_truth_total > 0
                   ? 1.0 - static_cast<double>(errors) / res.ground_truth_total
                   : 1.0;
    return res;
}

double idf1(const LabeledFrameSet& data, double iou_threshold) {
    if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
        throw std::invalid_argument("idf1: iou_threshold must be in (0,1)");
    }
    check_unique_ids(data.ground_truth, "ground-truth");
    check_unique_ids(data.predictions, "prediction");

    IdIndex gt_index;
    IdIndex pred_index;
    long long total_gt = 0;
    long long total_pred = 0;
    std::vector<std::vector<long long>> overlap;  // [gt][pred] co-detection counts

    for (int frame : merged_frames(data)) {
        const auto& gt = labels_at(data.ground_truth, frame);
        const auto& pred = labels_at(data.predictions, frame);
        std::vector<int> gi(gt.size());
        std::vector<int> pi(pred.size());
        for (std::size_t i = 0; i < gt.size(); ++i) {
            gi[i] = gt_index.lookup(gt[i].id);
        }
        for (std::size_t i = 0; i < pred.size(); ++i) {
            pi[i] = pred_index.lookup(pred[i].id);
        }
        overlap.resize(gt_index.size());
        for (auto& row : overlap) {
            row.resize(pred_index.size(), 0);
        }
        total_gt += static_cast<long long>(gt.size());
        total_pred += static_cast<long long>(pred.size());
        for (std::size_t r = 0; r < gt.size(); ++r) {
            for (std::size_t c = 0; c < pred.size(); ++c) {
                if (iou(gt[r].box, pred[c].box) >= iou_threshold) {
                    ++overlap[gi[r]][pi[c]];
                }
            }
        }
    }

    long long idtp = 0;
    if (!overlap.empty() && pred_index.size() > 0) {
        const double bound = static_cast<double>(total_gt + total_pred + 1);
        Matrix costs(gt_index.size(), pred_index.size());
        for (std::size_t r = 0; r < gt_index.size(); ++r) {
            for (std::size_t c = 0; c < pred_index.size(); ++c) {
                costs(r, c) = bound - static_cast<double>(overlap[r][c]);
            }
        }
        for (const auto& [r, c] : solve(costs, bound + 1.0).matches) {
            idtp += overlap[r][c];
        }
    }

    const long long idfn = total_gt - idtp;
    const long long idfp = total_pred - idtp;
    const long long denom = 2 * idtp + idfp + idfn;
    return denom > 0 ? static_cast<double>(2 * idtp) / static_cast<double>(denom) : 1.0;
}

std::vector<double> default_hota_alphas() {
    std::vector<double> alphas;
    for (int i = 1; i <= 19; ++i) {
        alphas.push_back(0.05 * i);
    }
    return alphas;
}

namespace {

HotaResult hota_impl(const LabeledFrameSet& data, const std::vector<double>& alphas,
                     bool parallel) {
    if (alphas.empty()) {
        throw std::invalid_argument("hota: empty alpha grid");
    }
    check_unique_ids(data.ground_truth, "ground-truth");
    check_unique_ids(data.predictions, "prediction");

    struct FrameData {
        std::vector<int> gt_idx;
        std::vector<int> pred_idx;
        Matrix sim;
        std::vector<std::pair<int, int>> matches;
    };

    const std::vector<int> frames = merged_frames(data);
    std::vector<FrameData> per_frame(frames.size());

    IdIndex gt_index;
    IdIndex pred_index;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        FrameData& fd = per_frame[f];
        for (const LabeledBox& lb : labels_at(data.ground_truth, frames[f])) {
            fd.gt_idx.push_back(gt_index.lookup(lb.id));
        }
        for (const LabeledBox& lb : labels_at(data.predictions, frames[f])) {
            fd.pred_idx.push_back(pred_index.lookup(lb.id));
        }
    }
    const std::size_t n_gt_ids = gt_index.size();
    const std::size_t n_pred_ids = pred_index.size();

    const std::ptrdiff_t n_frames = static_cast<std::ptrdiff_t>(frames.size());

    // Pairwise similarities per frame.
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t f = 0; f < n_frames; ++f) {
        const auto& gt = labels_at(data.ground_truth, frames[f]);
        const auto& pred = labels_at(data.predictions, frames[f]);
        Matrix sim(gt.size(), pred.size());
        for (std::size_t r = 0; r < gt.size(); ++r) {
            for (std::size_t c = 0; c < pred.size(); ++c) {
                sim(r, c) = iou(gt[r].box, pred[c].box);
            }
        }
        per_frame[f].sim = std::move(sim);
    }

    // Global alignment between identities, accumulated in frame order.
    std::vector<long long> gt_count(n_gt_ids, 0);
    std::vector<long long> pred_count(n_pred_ids, 0);
    std::vector<std::vector<double>> potential(n_gt_ids, std::vector<double>(n_pred_ids, 0.0));
    for (const FrameData& fd : per_frame) {
        std::vector<double> row_sum(fd.gt_idx.size(), 0.0);
        std::vector<double> col_sum(fd.pred_idx.size(), 0.0);
        for (std::size_t r = 0; r < fd.gt_idx.size(); ++r) {
            for (std::size_t c = 0; c < fd.pred_idx.size(); ++c) {
                row_sum[r] += fd.sim(r, c);
                col_sum[c] += fd.sim(r, c);
            }
        }
        for (std::size_t r = 0; r < fd.gt_idx.size(); ++r) {
            for (std::size_t c = 0; c < fd.pred_idx.size(); ++c) {
                const double s = fd.sim(r, c);
                const double denom = row_sum[r] + col_sum[c] - s;
                if (denom > 1e-12 && s > 0.0) {
                    potential[fd.gt_idx[r]][fd.pred_idx[c]] += s / denom;
                }
            }
        }
        for (int g : fd.gt_idx) {
            ++gt_count[g];
        }
        for (int p : fd.pred_idx) {
            ++pred_count[p];
        }
    }
    std::vector<std::vector<double>> alignment(n_gt_ids, std::vector<double>(n_pred_ids, 0.0));
    for (std::size_t g = 0; g < n_gt_ids; ++g) {
        for (std::size_t p = 0; p < n_pred_ids; ++p) {
            const double denom =
                static_cast<double>(gt_count[g] + pred_count[p]) - potential[g][p];
            alignment[g][p] = denom > 0.0 ? potential[g][p] / denom : 0.0;
        }
    }

    // Per-frame one-to-one matching that favors globally aligned identities.
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t f = 0; f < n_frames; ++f) {
        FrameData& fd = per_frame[f];
        if (fd.gt_idx.empty() || fd.pred_idx.empty()) {
            continue;
        }
        Matrix costs(fd.gt_idx.size(), fd.pred_idx.size());
        for (std::size_t r = 0; r < fd.gt_idx.size(); ++r) {
            for (std::size_t c = 0; c < fd.pred_idx.size(); ++c) {
                const double score = alignment[fd.gt_idx[r]][fd.pred_idx[c]] * fd.sim(r, c);
                costs(r, c) = std::max(0.0, 1.0 - score);
            }
        }
        fd.matches = solve(costs, 2.0).matches;
    }

    // Threshold sweep over integer tallies; order-independent by construction.
    long long total_gt = 0;
    long long total_pred = 0;
    for (std::size_t g = 0; g < n_gt_ids; ++g) {
        total_gt += gt_count[g];
    }
    for (std::size_t p = 0; p < n_pred_ids; ++p) {
        total_pred += pred_count[p];
    }

    double hota_sum = 0.0;
    double deta_sum = 0.0;
    double assa_sum = 0.0;
    std::vector<std::vector<long long>> match_count(n_gt_ids,
                                                    std::vector<long long>(n_pred_ids, 0));
    for (double alpha : alphas) {
        for (auto& row : match_count) {
            std::fill(row.begin(), row.end(), 0);
        }
        long long tp = 0;
        for (const FrameData& fd : per_frame) {
            for (const auto& [r, c] : fd.matches) {
                if (fd.sim(r, c) >= alpha - 1e-12) {
                    ++tp;
                    ++match_count[fd.gt_idx[r]][fd.pred_idx[c]];
                }
            }
        }
        const long long fn = total_gt - tp;
        const long long fp = total_pred - tp;
        double ass_sum = 0.0;
        for (std::size_t g = 0; g < n_gt_ids; ++g) {
            for (std::size_t p = 0; p < n_pred_ids; ++p) {
                const long long mc = match_count[g][p];
                if (mc > 0) {
                    const double pair_ass =
                        static_cast<double>(mc) /
                        static_cast<double>(gt_count[g] + pred_count[p] - mc);
                    ass_sum += static_cast<double>(mc) * pair_ass;
                }
            }
        }
        const double deta =
            static_cast<double>(tp) / std::max<long long>(1, tp + fn + fp);
        const double assa = ass_sum / static_cast<double>(std::max<long long>(1, tp));
        deta_sum += deta;
        assa_sum += assa;
        hota_sum += std::sqrt(deta * assa);
    }

    HotaResult res;
    const double n = static_cast<double>(alphas.size());
    res.hota = hota_sum / n;
    res.deta = deta_sum / n;
    res.assa = assa_sum / n;
    return res;
}

}  // namespace

HotaResult hota(const LabeledFrameSet& data, const std::vector<double>& alphas) {
    return hota_impl(data, alphas, true);
}

namespace serial {

HotaResult hota(const LabeledFrameSet& data, const std::vector<double>& alphas) {
    return hota_impl(data, alphas, false);
}

}  // namespace serial

MetricsReport evaluate(const LabeledFrameSet& data, double iou_threshold) {
    const ClearResult clear = clear_metrics(data, iou_threshold);
    const HotaResult h = hota(data);
    MetricsReport report;
    report.hota = h.hota;
    report.deta = h.deta;
    report.assa = h.assa;
    report.mota = clear.mota;
    report.idf1 = idf1(data, iou_threshold);
    report.id_switches = clear.id_switches;
    report.fragmentations = clear.fragmentations;
    report.false_positives = clear.false_positives;
    report.false_negatives = clear.false_negatives;
    return report;
}

}  // namespace eioutrack
