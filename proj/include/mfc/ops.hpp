#pragma once

// Operation counting for the per-iteration cost of the control path.
//
// `Counted` is a drop-in replacement for `double` inside the templated
// control laws and estimators. Arithmetic, comparisons and stores are tallied
// into the thread-local sink installed by an `OpScope`. Values are bit-identical
// to the plain `double` path, so an instrumented run produces the same trace.

#include <concepts>
#include <cstdint>
#include <type_traits>

namespace mfc {

struct OpCounts {
  std::uint64_t add_sub = 0;
  std::uint64_t mul_div = 0;
  std::uint64_t conditionals = 0;
  std::uint64_t assignments = 0;

  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

namespace detail {
inline thread_local OpCounts* active_counts = nullptr;

inline void tally_add() {
  if (active_counts) ++active_counts->add_sub;
}
inline void tally_mul() {
  if (active_counts) ++active_counts->mul_div;
}
inline void tally_cond() {
  if (active_counts) ++active_counts->conditionals;
}
inline void tally_store() {
  if (active_counts) ++active_counts->assignments;
}
}  // namespace detail

/// Installs `counts` as the tally sink for the current thread until destroyed.
class OpScope {
 public:
  explicit OpScope(OpCounts& counts) : previous_(detail::active_counts) {
    detail::active_counts = &counts;
  }
  ~OpScope() { detail::active_counts = previous_; }
  OpScope(const OpScope&) = delete;
  OpScope& operator=(const OpScope&) = delete;

 private:
  OpCounts* previous_;
};

/// Unnamed intermediate result. Producing one costs an arithmetic op but no
/// store; binding it to a `Counted` costs one store.
class CountedTemp {
 public:
  explicit constexpr CountedTemp(double v) : v_(v) {}
  constexpr double value() const { return v_; }

 private:
  double v_;
};

class Counted {
 public:
  constexpr Counted() = default;
  // Constants and configuration values enter without cost.
  constexpr Counted(double v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Counted(const Counted& o) : v_(o.v_) { detail::tally_store(); }
  Counted(CountedTemp t) : v_(t.value()) {  // NOLINT(google-explicit-constructor)
    detail::tally_store();
  }
  Counted& operator=(const Counted& o) {
    v_ = o.v_;
    detail::tally_store();
    return *this;
  }
  Counted& operator=(CountedTemp t) {
    v_ = t.value();
    detail::tally_store();
    return *this;
  }
  Counted& operator=(double v) {
    v_ = v;
    detail::tally_store();
    return *this;
  }

  constexpr double value() const { return v_; }

 private:
  double v_ = 0.0;
};

namespace detail {
template <class T>
concept CountedLike = std::same_as<std::remove_cvref_t<T>, Counted> ||
                      std::same_as<std::remove_cvref_t<T>, CountedTemp>;

template <class T>
concept Operand = CountedLike<T> || std::floating_point<std::remove_cvref_t<T>>;

template <class A, class B>
concept MixedOperands = Operand<A> && Operand<B> && (CountedLike<A> || CountedLike<B>);

template <class T>
constexpr double raw(const T& x) {
  if constexpr (CountedLike<T>) {
    return x.value();
  } else {
    return static_cast<double>(x);
  }
}
}  // namespace detail

template <class A, class B>
  requires detail::MixedOperands<A, B>
CountedTemp operator+(const A& a, const B& b) {
  detail::tally_add();
  return CountedTemp(detail::raw(a) + detail::raw(b));
}
template <class A, class B>
  requires detail::MixedOperands<A, B>
CountedTemp operator-(const A& a, const B& b) {
  detail::tally_add();
  return CountedTemp(detail::raw(a) - detail::raw(b));
}
template <class A, class B>
  requires detail::MixedOperands<A, B>
CountedTemp operator*(const A& a, const B& b) {
  detail::tally_mul();
  return CountedTemp(detail::raw(a) * detail::raw(b));
}
template <class A, class B>
  requires detail::MixedOperands<A, B>
CountedTemp operator/(const A& a, const B& b) {
  detail::tally_mul();
  return CountedTemp(detail::raw(a) / detail::raw(b));
}
template <class A>
  requires detail::CountedLike<A>
CountedTemp operator-(const A& a) {
  detail::tally_add();
  return CountedTemp(-detail::raw(a));
}

template <class A, class B>
  requires detail::MixedOperands<A, B>
bool operator<(const A& a, const B& b) {
  detail::tally_cond();
  return detail::raw(a) < detail::raw(b);
}
template <class A, class B>
  requires detail::MixedOperands<A, B>
bool operator>(const A& a, const B& b) {
  detail::tally_cond();
  return detail::raw(a) > detail::raw(b);
}

constexpr double to_double(double x) { return x; }
constexpr double to_double(const Counted& x) { return x.value(); }
constexpr double to_double(CountedTemp x) { return x.value(); }

}  // namespace mfc
