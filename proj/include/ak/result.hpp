/**
 * result.hpp
 *
 * Minimal value-or-error holder for operations whose failure is an expected
 * outcome (parse errors, validation errors, non-derivable judgments).
 */

#pragma once

#include <stdexcept>
#include <utility>
#include <variant>

namespace ak {

template <typename E>
struct Unexpected {
  E error;
};

template <typename E>
Unexpected<std::decay_t<E>> unexpected(E&& e) {
  return {std::forward<E>(e)};
}

template <typename T, typename E>
class Result {
 public:
  Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}
  template <typename G>
  Result(Unexpected<G> e) : v_(std::in_place_index<1>, std::move(e.error)) {}

  bool has_value() const { return v_.index() == 0; }
  explicit operator bool() const { return has_value(); }

  T& value() & {
    if (!has_value()) throw std::logic_error("Result holds an error");
    return std::get<0>(v_);
  }
  const T& value() const& {
    if (!has_value()) throw std::logic_error("Result holds an error");
    return std::get<0>(v_);
  }
  T&& value() && {
    if (!has_value()) throw std::logic_error("Result holds an error");
    return std::get<0>(std::move(v_));
  }

  T& operator*() & { return value(); }
  const T& operator*() const& { return value(); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }

  const E& error() const& {
    if (has_value()) throw std::logic_error("Result holds a value");
    return std::get<1>(v_);
  }

 private:
  std::variant<T, E> v_;
};

}  // namespace ak
