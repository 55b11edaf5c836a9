#include "fringe/training_log.hpp"

#include <algorithm>

#include "fringe/error.hpp"

namespace fringe {

nlohmann::json to_json(const LogRecord& r) {
  return {{"stage", r.stage}, {"epoch", r.epoch}, {"step", r.step},     {"loss", r.loss},
          {"lr", r.lr},       {"batch_size", r.batch_size}, {"seed", r.seed}};
}

LogRecord log_record_from_json(const nlohmann::json& j) {
  try {
    LogRecord r;
    r.stage = j.at("stage").get<std::string>();
    r.epoch = j.at("epoch").get<std::size_t>();
    r.step = j.at("step").get<std::uint64_t>();
    r.loss = j.at("loss").get<double>();
    r.lr = j.at("lr").get<double>();
    r.batch_size = j.at("batch_size").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed training log record: ") + e.what());
  }
}

TrainingLogWriter::TrainingLogWriter(const std::filesystem::path& path, bool append)
    : out_(path, append ? std::ios::app : std::ios::trunc), path_(path) {
  if (!out_) throw IoError("cannot write training log " + path.string());
}

void TrainingLogWriter::write(const LogRecord& r) {
  out_ << to_json(r).dump() << '\n';
  out_.flush();
  if (!out_) throw IoError("failed writing training log " + path_.string());
}

std::vector<LogRecord> read_training_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open training log " + path.string());
  std::vector<LogRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(log_record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError("training log line is not JSON: " + std::string(e.what()));
    }
  }
  return out;
}

double window_mean(const std::vector<LogRecord>& log, std::size_t first, std::size_t count) {
  const std::size_t begin = std::min(first, log.size());
  const std::size_t end = std::min(begin + count, log.size());
  if (begin == end) return 0.0;
  double sum = 0.0;
  for (std::size_t i = begin; i < end; ++i) sum += log[i].loss;
  return sum / static_cast<double>(end - begin);
}

}  // namespace fringe
