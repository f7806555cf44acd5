#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace foldasp {

/// Interned identifier. Two symbols are equal iff they name the same string.
/// The backing storage lives for the whole process, so symbols are trivially
/// copyable and safe to share between threads.
class Symbol {
 public:
  Symbol() : Symbol(intern("")) {}

  static Symbol intern(std::string_view text);

  std::string_view name() const { return *text_; }
  std::uint32_t id() const { return id_; }
  bool empty() const { return text_->empty(); }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend bool operator!=(Symbol a, Symbol b) { return a.id_ != b.id_; }

 private:
  Symbol(const std::string* text, std::uint32_t id) : text_(text), id_(id) {}

  const std::string* text_;
  std::uint32_t id_;
};

/// Orders symbols by their text, not by interning order.
struct SymbolTextLess {
  bool operator()(Symbol a, Symbol b) const { return a.name() < b.name(); }
};

}  // namespace foldasp

template <>
struct std::hash<foldasp::Symbol> {
  std::size_t operator()(foldasp::Symbol s) const noexcept { return std::hash<std::uint32_t>{}(s.id()); }
};
