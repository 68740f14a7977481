#pragma once

#include <mutex>
#include <ostream>
#include <string>
#include <vector>

namespace fsforge {

// Ordered, thread-safe list of log lines; written out as run.log.
class RunLog {
 public:
  RunLog() = default;
  RunLog(const RunLog& other) : lines_(other.lines()) {}
  RunLog& operator=(const RunLog& other) {
    if (this == &other) return *this;
    auto copy = other.lines();
    std::lock_guard lock(mutex_);
    lines_ = std::move(copy);
    return *this;
  }

  void info(std::string line) { add("INFO  " + std::move(line)); }
  void warn(std::string line) { add("WARN  " + std::move(line)); }

  std::vector<std::string> lines() const {
    std::lock_guard lock(mutex_);
    return lines_;
  }

  void append(const RunLog& other) {
    for (auto& l : other.lines()) add(std::move(l));
  }

  void write(std::ostream& out) const {
    for (const auto& l : lines()) out << l << '\n';
  }

 private:
  void add(std::string line) {
    std::lock_guard lock(mutex_);
    lines_.push_back(std::move(line));
  }

  mutable std::mutex mutex_;
  std::vector<std::string> lines_;
};

inline void log_info(RunLog* log, std::string line) {
  if (log) log->info(std::move(line));
}
inline void log_warn(RunLog* log, std::string line) {
  if (log) log->warn(std::move(line));
}

}  // namespace fsforge
