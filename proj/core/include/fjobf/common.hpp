#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

namespace fjobf {

// Source position. Positions never take part in structural equality, so two
// ASTs that differ only in layout compare equal.
struct Pos {
  int line = 0;
  int col = 0;
  bool operator==(const Pos&) const { return true; }
};

enum class ErrorKind {
  Syntax,
  DuplicateLabel,
  Validation,
  Eval,
  Unbound,
  MissingPhiOperand,
  ResourceLimit,
  Translate,
  Io,
  Internal,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg, Pos pos = {})
      : std::runtime_error(format(kind, msg, pos)), kind_(kind), pos_(pos), msg_(std::move(msg)) {}

  ErrorKind kind() const { return kind_; }
  Pos pos() const { return pos_; }
  const std::string& message() const { return msg_; }

 private:
  static std::string format(ErrorKind kind, const std::string& msg, Pos pos);
  ErrorKind kind_;
  Pos pos_;
  std::string msg_;
};

// Owning pointer with value semantics: deep copy and deep equality.
template <class T>
class Box {
 public:
  Box() : p_(std::make_unique<T>()) {}
  Box(T v) : p_(std::make_unique<T>(std::move(v))) {}
  Box(const Box& o) : p_(std::make_unique<T>(*o.p_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& o) {
    if (this != &o) p_ = std::make_unique<T>(*o.p_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  T& operator*() { return *p_; }
  const T& operator*() const { return *p_; }
  T* operator->() { return p_.get(); }
  const T* operator->() const { return p_.get(); }
  T* get() { return p_.get(); }
  const T* get() const { return p_.get(); }

  bool operator==(const Box& o) const { return *p_ == *o.p_; }

 private:
  std::unique_ptr<T> p_;
};

}  // namespace fjobf
