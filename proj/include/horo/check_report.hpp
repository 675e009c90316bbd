#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace horo {

struct Witness {
    long index = -1;             // flat grid index, or ring sample index
    std::string location;        // "interior", "boundary:outer", "ring:ball:0", ...
    std::vector<double> coords;  // embedding coordinates of the point
};

// Result of a hypothesis / conclusion / property check.
// Invariant: passed == false implies witness is set (enforced by finalize()).
struct CheckReport {
    std::string name;
    bool passed = true;
    std::map<std::string, double> metrics;
    std::map<std::string, std::string> info;
    std::optional<Witness> witness;
    std::vector<CheckReport> children;

    void fail(Witness w) {
        passed = false;
        if (!witness) witness = std::move(w);
    }

    // Folds a child into this report; the first failing child's witness is
    // promoted to the parent.
    void add_child(CheckReport child) {
        if (!child.passed) {
            passed = false;
            if (!witness && child.witness) {
                Witness w = *child.witness;
                w.location = child.name + "/" + w.location;
                witness = std::move(w);
            }
        }
        children.push_back(std::move(child));
    }

    const CheckReport* child(const std::string& child_name) const {
        for (const auto& c : children)
            if (c.name == child_name) return &c;
        return nullptr;
    }

    double metric(const std::string& key) const {
        auto it = metrics.find(key);
        return it == metrics.end() ? 0.0 : it->second;
    }

    // Guarantees the witness invariant for reports that failed without a
    // pointwise culprit (e.g. a scalar residual).
    void finalize() {
        for (auto& c : children) c.finalize();
        if (!passed && !witness) witness = Witness{-1, "global", {}};
    }
};

}  // namespace horo
