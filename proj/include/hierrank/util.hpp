#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace hierrank {

// Library ops throw Error on contract violations; the CLI turns these into
// machine-readable JSON on stderr. `code` is a stable snake_case identifier.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
    throw Error(code, msg);
}

// 0 -> hardware concurrency (at least 1).
int resolve_threads(int requested);

// Runs body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
// depend only on (n, threads), so results are schedule-independent as long as
// workers write disjoint output slices.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace hierrank
