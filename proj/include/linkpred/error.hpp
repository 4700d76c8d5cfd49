#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace linkpred {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or empty edge list.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  /// 1-based line number of the offending line, 0 when not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Violated precondition on arguments or configuration.
class InputError : public Error {
 public:
  using Error::Error;
};

/// More negative dyads requested than the graph can supply.
class CapacityError : public Error {
 public:
  CapacityError(std::size_t requested, std::size_t available)
      : Error("requested " + std::to_string(requested) + " non-edges but only " +
              std::to_string(available) + " are available"),
        requested_(requested),
        available_(available) {}
  std::size_t requested() const { return requested_; }
  std::size_t available() const { return available_; }

 private:
  std::size_t requested_;
  std::size_t available_;
};

/// Estimation failed: separation, singular information, or MCMC non-convergence.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> moment_gap = {})
      : Error(what), moment_gap_(std::move(moment_gap)) {}
  /// Observed minus simulated statistics at the last round (MCMC-MLE only).
  const std::vector<double>& moment_gap() const { return moment_gap_; }

 private:
  std::vector<double> moment_gap_;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(int epoch)
      : Error("training diverged (non-finite loss) at epoch " + std::to_string(epoch)),
        epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

/// Maximum-clique search ran out of time; carries the incumbent.
class CliqueTimeout : public Error {
 public:
  explicit CliqueTimeout(std::vector<std::uint32_t> best)
      : Error("clique search budget exceeded; best lower bound " + std::to_string(best.size())),
        best_(std::move(best)) {}
  std::size_t lower_bound() const { return best_.size(); }
  const std::vector<std::uint32_t>& witness() const { return best_; }

 private:
  std::vector<std::uint32_t> best_;
};

}  // namespace linkpred
