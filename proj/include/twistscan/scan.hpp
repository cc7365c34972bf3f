#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "twistscan/errors.hpp"
#include "twistscan/fnv.hpp"
#include "twistscan/jobs.hpp"

namespace twistscan {

inline void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw DataError("cannot open '" + tmp + "' for writing");
        f << content;
        f.flush();
        if (!f) throw DataError("write to '" + tmp + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_all(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Controls for the chunked scan driver.  Worker count never affects results;
// resuming from a snapshot reproduces the uninterrupted output byte for byte.
struct ScanControl {
    unsigned threads = 1;
    std::string checkpoint_path;         // empty: no snapshots written
    std::uint64_t checkpoint_every = 16; // chunks per snapshot
    bool resume = false;
    std::uint64_t stop_after_chunks = 0; // 0 = run to completion
};

// Scan must provide:
//   using Item = ...;
//   std::string config_string() const;              // identifies the run
//   std::uint64_t num_chunks() const;
//   std::vector<Item> run_chunk(std::uint64_t) const;
//   static std::string encode_item(const Item&);    // single line, no '\n'
//   static Item decode_item(const std::string&);
template <class Scan>
struct ScanResult {
    std::vector<typename Scan::Item> items;
    std::uint64_t chunks_done = 0;
    std::uint64_t chunks_total = 0;
    bool completed() const { return chunks_done == chunks_total; }
};

namespace detail {

template <class Scan>
std::string snapshot_string(const Scan& scan, const ScanResult<Scan>& st) {
    std::string out = "snapshot 1\n";
    out += "config " + fnv1a64_hex(scan.config_string()) + "\n";
    out += "total " + std::to_string(st.chunks_total) + "\n";
    out += "done " + std::to_string(st.chunks_done) + "\n";
    out += "items " + std::to_string(st.items.size()) + "\n";
    for (const auto& it : st.items) out += Scan::encode_item(it) + "\n";
    return out;
}

template <class Scan>
void load_snapshot(const Scan& scan, const std::string& path, ScanResult<Scan>& st) {
    std::istringstream in(read_all(path));
    std::string line;
    if (!std::getline(in, line) || line != "snapshot 1")
        throw DataError("'" + path + "' is not a version-1 snapshot");
    std::uint64_t total = 0, done = 0, nitems = 0;
    bool have_items = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "config") {
            std::string hex;
            ls >> hex;
            if (hex != fnv1a64_hex(scan.config_string()))
                throw DataError("snapshot '" + path + "' was written by a different scan config");
        } else if (key == "total") {
            ls >> total;
        } else if (key == "done") {
            ls >> done;
        } else if (key == "items") {
            ls >> nitems;
            have_items = true;
            break;
        }
        // unknown header keys are ignored for forward compatibility
    }
    if (!have_items) throw DataError("snapshot '" + path + "' has no items section");
    if (total != scan.num_chunks())
        throw DataError("snapshot '" + path + "' chunk count does not match this scan");
    st.chunks_done = done;
    st.items.clear();
    st.items.reserve(nitems);
    for (std::uint64_t i = 0; i < nitems; ++i) {
        if (!std::getline(in, line)) throw DataError("snapshot '" + path + "' is truncated");
        st.items.push_back(Scan::decode_item(line));
    }
}

}  // namespace detail

template <class Scan>
ScanResult<Scan> run_scan(const Scan& scan, const ScanControl& ctl = {}) {
    ScanResult<Scan> st;
    st.chunks_total = scan.num_chunks();
    if (ctl.resume) {
        if (ctl.checkpoint_path.empty())
            throw Error("resume requested without a checkpoint path");
        detail::load_snapshot(scan, ctl.checkpoint_path, st);
    }
    std::uint64_t processed_this_run = 0;
    while (st.chunks_done < st.chunks_total) {
        if (ctl.stop_after_chunks && processed_this_run >= ctl.stop_after_chunks) break;
        std::uint64_t batch = std::min<std::uint64_t>(
            ctl.checkpoint_every ? ctl.checkpoint_every : 16, st.chunks_total - st.chunks_done);
        if (ctl.stop_after_chunks)
            batch = std::min<std::uint64_t>(batch, ctl.stop_after_chunks - processed_this_run);
        std::vector<std::vector<typename Scan::Item>> slots(batch);
        std::uint64_t base = st.chunks_done;
        parallel_for(batch, ctl.threads, [&](std::uint64_t i) { slots[i] = scan.run_chunk(base + i); });
        for (auto& s : slots)
            for (auto& it : s) st.items.push_back(std::move(it));
        st.chunks_done += batch;
        processed_this_run += batch;
        if (!ctl.checkpoint_path.empty())
            atomic_write(ctl.checkpoint_path, detail::snapshot_string(scan, st));
    }
    return st;
}

}  // namespace twistscan
