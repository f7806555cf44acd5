#include "foldasp/symbol.hpp"

#include <deque>
#include <mutex>
#include <unordered_map>

namespace foldasp {

namespace {

struct SymbolTable {
  std::mutex mutex;
  std::deque<std::string> storage;
  std::unordered_map<std::string_view, std::uint32_t> index;
};

SymbolTable& table() {
  static SymbolTable* t = new SymbolTable();
  return *t;
}

}  // namespace

Symbol Symbol::intern(std::string_view text) {
  SymbolTable& t = table();
  std::lock_guard<std::mutex> lock(t.mutex);
  auto it = t.index.find(text);
  if (it != t.index.end()) return Symbol(&t.storage[it->second], it->second);
  auto id = static_cast<std::uint32_t>(t.storage.size());
  t.storage.emplace_back(text);
  t.index.emplace(std::string_view(t.storage.back()), id);
  return Symbol(&t.storage.back(), id);
}

}  // namespace foldasp
