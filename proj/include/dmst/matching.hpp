#pragma once

// Maximum-weight general matching (Edmonds' blossom algorithm with dual
// variables, O(n^3)). Integer weights keep every dual update exact.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dmst::matching {

struct WeightedEdge {
    int i;
    int j;
    std::int64_t w;
};

namespace detail {

class Blossom {
public:
    Blossom(const std::vector<WeightedEdge>& edges, bool max_cardinality)
        : edges_(edges), maxcard_(max_cardinality) {
        for (const auto& e : edges_) {
            if (e.i < 0 || e.j < 0 || e.i == e.j) throw std::invalid_argument("matching: bad edge");
            nv_ = std::max({nv_, e.i + 1, e.j + 1});
        }
        const int ne = static_cast<int>(edges_.size());
        std::int64_t maxw = 0;
        for (const auto& e : edges_) maxw = std::max(maxw, e.w);
        endpoint_.resize(2 * ne);
        for (int p = 0; p < 2 * ne; ++p) endpoint_[p] = p % 2 == 0 ? edges_[p / 2].i : edges_[p / 2].j;
        neighbend_.assign(nv_, {});
        for (int k = 0; k < ne; ++k) {
            neighbend_[edges_[k].i].push_back(2 * k + 1);
            neighbend_[edges_[k].j].push_back(2 * k);
        }
        mate_.assign(nv_, -1);
        label_.assign(2 * nv_, 0);
        labelend_.assign(2 * nv_, -1);
        inblossom_.resize(nv_);
        for (int v = 0; v < nv_; ++v) inblossom_[v] = v;
        parent_.assign(2 * nv_, -1);
        childs_.assign(2 * nv_, {});
        base_.assign(2 * nv_, -1);
        for (int v = 0; v < nv_; ++v) base_[v] = v;
        endps_.assign(2 * nv_, {});
        bestedge_.assign(2 * nv_, -1);
        bestedges_.assign(2 * nv_, {});
        has_bestedges_.assign(2 * nv_, 0);
        for (int b = 2 * nv_ - 1; b >= nv_; --b) unused_.push_back(b);
        dual_.assign(2 * nv_, 0);
        for (int v = 0; v < nv_; ++v) dual_[v] = maxw;
        allow_.assign(ne, 0);
    }

    /// mate[v] = partner vertex or -1.
    std::vector<int> solve() {
        for (int round = 0; round < nv_; ++round) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(bestedge_.begin(), bestedge_.end(), -1);
            for (int b = nv_; b < 2 * nv_; ++b) {
                bestedges_[b].clear();
                has_bestedges_[b] = 0;
            }
            std::fill(allow_.begin(), allow_.end(), 0);
            queue_.clear();
            for (int v = 0; v < nv_; ++v)
                if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

            bool augmented = false;
            while (true) {
                while (!queue_.empty() && !augmented) {
                    const int v = queue_.back();
                    queue_.pop_back();
                    for (int p : neighbend_[v]) {
                        const int k = p / 2;
                        const int w = endpoint_[p];
                        if (inblossom_[v] == inblossom_[w]) continue;
                        std::int64_t kslack = 0;
                        if (!allow_[k]) {
                            kslack = slack(k);
                            if (kslack <= 0) allow_[k] = 1;
                        }
                        if (allow_[k]) {
                            if (label_[inblossom_[w]] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label_[inblossom_[w]] == 1) {
                                const int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[w] == 0) {
                                label_[w] = 2;
                                labelend_[w] = p ^ 1;
                            }
                        } else if (label_[inblossom_[w]] == 1) {
                            const int b = inblossom_[v];
                            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
                        } else if (label_[w] == 0) {
                            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
                        }
                    }
                }
                if (augmented) break;

                int deltatype = -1;
                std::int64_t delta = 0;
                int deltaedge = -1, deltablossom = -1;
                if (!maxcard_) {
                    deltatype = 1;
                    delta = *std::min_element(dual_.begin(), dual_.begin() + nv_);
                }
                for (int v = 0; v < nv_; ++v) {
                    if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                        const std::int64_t d = slack(bestedge_[v]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[v];
                        }
                    }
                }
                for (int b = 0; b < 2 * nv_; ++b) {
                    if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                        const std::int64_t ks = slack(bestedge_[b]);
                        if (ks % 2 != 0) throw std::logic_error("matching: odd slack");
                        const std::int64_t d = ks / 2;
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[b];
                        }
                    }
                }
                for (int b = nv_; b < 2 * nv_; ++b) {
                    if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 && (deltatype == -1 || dual_[b] < delta)) {
                        delta = dual_[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if (deltatype == -1) {
                    deltatype = 1;
                    delta = std::max<std::int64_t>(0, *std::min_element(dual_.begin(), dual_.begin() + nv_));
                }
                for (int v = 0; v < nv_; ++v) {
                    if (label_[inblossom_[v]] == 1) dual_[v] -= delta;
                    else if (label_[inblossom_[v]] == 2) dual_[v] += delta;
                }
                for (int b = nv_; b < 2 * nv_; ++b) {
                    if (base_[b] >= 0 && parent_[b] == -1) {
                        if (label_[b] == 1) dual_[b] += delta;
                        else if (label_[b] == 2) dual_[b] -= delta;
                    }
                }
                if (deltatype == 1) break;
                if (deltatype == 2) {
                    allow_[deltaedge] = 1;
                    int i = edges_[deltaedge].i, j = edges_[deltaedge].j;
                    if (label_[inblossom_[i]] == 0) std::swap(i, j);
                    queue_.push_back(i);
                } else if (deltatype == 3) {
                    allow_[deltaedge] = 1;
                    queue_.push_back(edges_[deltaedge].i);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }
            if (!augmented) break;
            for (int b = nv_; b < 2 * nv_; ++b) {
                if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) expand_blossom(b, true);
            }
        }
        std::vector<int> mate(nv_, -1);
        for (int v = 0; v < nv_; ++v)
            if (mate_[v] >= 0) mate[v] = endpoint_[mate_[v]];
        return mate;
    }

private:
    std::int64_t slack(int k) const {
        const auto& e = edges_[k];
        return dual_[e.i] + dual_[e.j] - 2 * e.w;
    }

    static int wrap(int j, int size) { return ((j % size) + size) % size; }

    void leaves(int b, std::vector<int>& out) const {
        if (b < nv_) {
            out.push_back(b);
            return;
        }
        for (int t : childs_[b]) leaves(t, out);
    }

    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        leaves(b, out);
        return out;
    }

    void assign_label(int w, int t, int p) {
        const int b = inblossom_[w];
        label_[w] = label_[b] = t;
        labelend_[w] = labelend_[b] = p;
        bestedge_[w] = bestedge_[b] = -1;
        if (t == 1) {
            leaves(b, queue_);
        } else if (t == 2) {
            const int base = base_[b];
            assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
        }
    }

    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            int b = inblossom_[v];
            if (label_[b] & 4) {
                base = base_[b];
                break;
            }
            path.push_back(b);
            label_[b] = 5;
            if (labelend_[b] == -1) {
                v = -1;
            } else {
                v = endpoint_[labelend_[b]];
                b = inblossom_[v];
                v = endpoint_[labelend_[b]];
            }
            if (w != -1) std::swap(v, w);
        }
        for (int b : path) label_[b] = 1;
        return base;
    }

    void add_blossom(int base, int k) {
        int v = edges_[k].i, w = edges_[k].j;
        const int bb = inblossom_[base];
        int bv = inblossom_[v], bw = inblossom_[w];
        const int b = unused_.back();
        unused_.pop_back();
        base_[b] = base;
        parent_[b] = -1;
        parent_[bb] = b;
        auto& path = childs_[b];
        auto& endps = endps_[b];
        path.clear();
        endps.clear();
        while (bv != bb) {
            parent_[bv] = b;
            path.push_back(bv);
            endps.push_back(labelend_[bv]);
            v = endpoint_[labelend_[bv]];
            bv = inblossom_[v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            parent_[bw] = b;
            path.push_back(bw);
            endps.push_back(labelend_[bw] ^ 1);
            w = endpoint_[labelend_[bw]];
            bw = inblossom_[w];
        }
        label_[b] = 1;
        labelend_[b] = labelend_[bb];
        dual_[b] = 0;
        for (int x : leaves(b)) {
            if (label_[inblossom_[x]] == 2) queue_.push_back(x);
            inblossom_[x] = b;
        }
        std::vector<int> bestedgeto(2 * nv_, -1);
        for (int sub : path) {
            std::vector<int> candidates;
            if (!has_bestedges_[sub]) {
                for (int x : leaves(sub))
                    for (int p : neighbend_[x]) candidates.push_back(p / 2);
            } else {
                candidates = bestedges_[sub];
            }
            for (int kk : candidates) {
                int i = edges_[kk].i, j = edges_[kk].j;
                if (inblossom_[j] == b) std::swap(i, j);
                const int bj = inblossom_[j];
                if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj])))
                    bestedgeto[bj] = kk;
            }
            bestedges_[sub].clear();
            has_bestedges_[sub] = 0;
            bestedge_[sub] = -1;
        }
        bestedges_[b].clear();
        for (int kk : bestedgeto)
            if (kk != -1) bestedges_[b].push_back(kk);
        has_bestedges_[b] = 1;
        bestedge_[b] = -1;
        for (int kk : bestedges_[b])
            if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
    }

    void expand_blossom(int b, bool endstage) {
        const std::vector<int> kids = childs_[b];
        for (int s : kids) {
            parent_[s] = -1;
            if (s < nv_) {
                inblossom_[s] = s;
            } else if (endstage && dual_[s] == 0) {
                expand_blossom(s, endstage);
            } else {
                for (int x : leaves(s)) inblossom_[x] = s;
            }
        }
        if (!endstage && label_[b] == 2) {
            const auto& ch = childs_[b];
            const auto& ep = endps_[b];
            const int size = static_cast<int>(ch.size());
            const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
            int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
            int jstep, endptrick;
            if (j & 1) {
                j -= size;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            int p = labelend_[b];
            while (j != 0) {
                label_[endpoint_[p ^ 1]] = 0;
                label_[endpoint_[ep[wrap(j - endptrick, size)] ^ endptrick ^ 1]] = 0;
                assign_label(endpoint_[p ^ 1], 2, p);
                allow_[ep[wrap(j - endptrick, size)] / 2] = 1;
                j += jstep;
                p = ep[wrap(j - endptrick, size)] ^ endptrick;
                allow_[p / 2] = 1;
                j += jstep;
            }
            int bv = ch[wrap(j, size)];
            label_[endpoint_[p ^ 1]] = label_[bv] = 2;
            labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
            bestedge_[bv] = -1;
            j += jstep;
            while (ch[wrap(j, size)] != entrychild) {
                bv = ch[wrap(j, size)];
                if (label_[bv] == 1) {
                    j += jstep;
                    continue;
                }
                int found = -1;
                for (int x : leaves(bv)) {
                    if (label_[x] != 0) {
                        found = x;
                        break;
                    }
                }
                if (found >= 0) {
                    label_[found] = 0;
                    label_[endpoint_[mate_[base_[bv]]]] = 0;
                    assign_label(found, 2, labelend_[found]);
                }
                j += jstep;
            }
        }
        label_[b] = labelend_[b] = -1;
        childs_[b].clear();
        endps_[b].clear();
        base_[b] = -1;
        bestedges_[b].clear();
        has_bestedges_[b] = 0;
        bestedge_[b] = -1;
        unused_.push_back(b);
    }

    void augment_blossom(int b, int v) {
        int t = v;
        while (parent_[t] != b) t = parent_[t];
        if (t >= nv_) augment_blossom(t, v);
        auto& ch = childs_[b];
        auto& ep = endps_[b];
        const int size = static_cast<int>(ch.size());
        const int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
        int j = i, jstep, endptrick;
        if (i & 1) {
            j -= size;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            t = ch[wrap(j, size)];
            const int p = ep[wrap(j - endptrick, size)] ^ endptrick;
            if (t >= nv_) augment_blossom(t, endpoint_[p]);
            j += jstep;
            t = ch[wrap(j, size)];
            if (t >= nv_) augment_blossom(t, endpoint_[p ^ 1]);
            mate_[endpoint_[p]] = p ^ 1;
            mate_[endpoint_[p ^ 1]] = p;
        }
        std::rotate(ch.begin(), ch.begin() + i, ch.end());
        std::rotate(ep.begin(), ep.begin() + i, ep.end());
        base_[b] = base_[ch[0]];
    }

    void augment_matching(int k) {
        const int v = edges_[k].i, w = edges_[k].j;
        const int starts[2][2] = {{v, 2 * k + 1}, {w, 2 * k}};
        for (const auto& sp : starts) {
            int s = sp[0], p = sp[1];
            while (true) {
                const int bs = inblossom_[s];
                if (bs >= nv_) augment_blossom(bs, s);
                mate_[s] = p;
                if (labelend_[bs] == -1) break;
                const int t = endpoint_[labelend_[bs]];
                const int bt = inblossom_[t];
                s = endpoint_[labelend_[bt]];
                const int j = endpoint_[labelend_[bt] ^ 1];
                if (bt >= nv_) augment_blossom(bt, j);
                mate_[j] = labelend_[bt];
                p = labelend_[bt] ^ 1;
            }
        }
    }

    std::vector<WeightedEdge> edges_;
    bool maxcard_;
    int nv_ = 0;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_, label_, labelend_, inblossom_, parent_, base_, bestedge_, unused_, queue_;
    std::vector<std::vector<int>> childs_, endps_, bestedges_;
    std::vector<char> has_bestedges_, allow_;
    std::vector<std::int64_t> dual_;
};

}  // namespace detail

/// Maximum-weight matching over the given edges; with `max_cardinality`
/// the heaviest among the maximum-cardinality matchings. Returns mate[v]
/// (or -1) for every vertex up to the largest endpoint.
inline std::vector<int> max_weight_matching(const std::vector<WeightedEdge>& edges, bool max_cardinality = false) {
    if (edges.empty()) return {};
    return detail::Blossom(edges, max_cardinality).solve();
}

}  // namespace dmst::matching
