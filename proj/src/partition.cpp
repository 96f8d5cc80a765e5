#include "fusionkit/partition.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

namespace fusionkit {

std::string Partition::str() const {
    if (parts_.empty()) return "[]";
    std::string s = "[";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(parts_[i]);
    }
    return s + "]";
}

namespace {

void enumerate(int n, int min_part, int max_part, std::vector<int>& acc,
               std::vector<Partition>& out) {
    if (n == 0) {
        std::vector<int> parts(acc.rbegin(), acc.rend());
        out.emplace_back(std::move(parts));
        return;
    }
    for (int p = min_part; p <= std::min(n, max_part); ++p) {
        acc.push_back(p);
        enumerate(n - p, p, max_part, acc, out);
        acc.pop_back();
    }
}

}  // namespace

std::vector<Partition> partitions_of(int n, int min_part) {
    if (n < 0) return {};
    static std::map<std::pair<int, int>, std::vector<Partition>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find({n, min_part});
    if (it != cache.end()) return it->second;
    std::vector<Partition> out;
    std::vector<int> acc;
    enumerate(n, min_part, n == 0 ? 1 : n, acc, out);
    std::sort(out.begin(), out.end());
    cache.emplace(std::make_pair(n, min_part), out);
    return out;
}

long partition_count(int n, int min_part) {
    return static_cast<long>(partitions_of(n, min_part).size());
}

}  // namespace fusionkit
