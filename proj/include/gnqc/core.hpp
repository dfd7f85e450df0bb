#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace gnqc {

using Vec2 = Eigen::Vector2d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Error categories surfaced through the CLI exit code and stderr tag.
enum class ErrorCategory { config, io, solver, domain, internal };

class Error : public std::runtime_error {
public:
  Error(ErrorCategory cat, const std::string& msg) : std::runtime_error(msg), category_(cat) {}
  ErrorCategory category() const { return category_; }

private:
  ErrorCategory category_;
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(ErrorCategory::config, msg) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error(ErrorCategory::io, msg) {}
};

class SolverError : public Error {
public:
  explicit SolverError(const std::string& msg) : Error(ErrorCategory::solver, msg) {}
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& msg) : Error(ErrorCategory::domain, msg) {}
};

const char* to_string(ErrorCategory cat);

/// Axis-aligned rectangle, used for notches and full-resolution regions.
struct Rect {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{0.0, 0.0};

  bool contains_open(const Vec2& p) const {
    return p.x() > lo.x() && p.x() < hi.x() && p.y() > lo.y() && p.y() < hi.y();
  }
  bool contains_closed(const Vec2& p, double tol = 0.0) const {
    return p.x() >= lo.x() - tol && p.x() <= hi.x() + tol && p.y() >= lo.y() - tol &&
           p.y() <= hi.y() + tol;
  }
  bool empty() const { return hi.x() <= lo.x() || hi.y() <= lo.y(); }
};

}  // namespace gnqc
