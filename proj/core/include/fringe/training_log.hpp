#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fringe {

/// One optimizer step.
struct LogRecord {
  std::string stage;  ///< "pretrain" or "finetune"
  std::size_t epoch = 0;
  std::uint64_t step = 0;  ///< global step, 1-based
  double loss = 0.0;
  double lr = 0.0;
  std::size_t batch_size = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

nlohmann::json to_json(const LogRecord& r);
LogRecord log_record_from_json(const nlohmann::json& j);

/// Appends records as JSON lines, flushing after each one.
class TrainingLogWriter {
 public:
  explicit TrainingLogWriter(const std::filesystem::path& path, bool append = false);
  void write(const LogRecord& r);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

std::vector<LogRecord> read_training_log(const std::filesystem::path& path);

/// Mean loss of records [first, first + count), clipped to the log.
double window_mean(const std::vector<LogRecord>& log, std::size_t first, std::size_t count);

}  // namespace fringe
