#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace bindlab {

enum class Kind : std::uint8_t {
  Name,
  Tag,
  Nonce,
  Pms,
  DhExp,
  DhPub,
  DhShared,
  PubKey,
  PrivKey,
  SymKey,
  Tuple,
  Hash,
  SymEnc,
  AsymEnc,
  Sig,
};

const char* kind_head(Kind k);

// Immutable symbolic message value. Structural equality is the only equality;
// the single algebraic identity is DhShared commutativity, handled by storing
// exponents in sorted order at construction time.
class Term {
 public:
  Term() = default;

  Kind kind() const { return node_->kind; }
  const std::string& text() const { return node_->text; }
  const std::vector<Term>& parts() const { return node_->parts; }
  std::size_t arity() const { return node_->parts.size(); }
  const Term& part(std::size_t i) const { return node_->parts[i]; }
  std::size_t hash() const { return node_->hash; }
  int depth() const { return node_->depth; }
  bool valid() const { return node_ != nullptr; }

  bool is_atom() const;

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }
  std::strong_ordering operator<=>(const Term& o) const;

  std::string str() const;

  static Term make(Kind k, std::string text, std::vector<Term> parts);

 private:
  struct Node {
    Kind kind;
    std::string text;
    std::vector<Term> parts;
    std::size_t hash;
    int depth;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

Term name(std::string_view id);
Term tag(std::string_view literal);
Term nonce(std::string_view id);
Term pms(std::string_view id);
Term dh_exp(std::string_view id);
Term dh_pub(const Term& exp);
Term dh_shared(const Term& a, const Term& b);
Term pubk(std::string_view owner);
Term privk(std::string_view owner);
Term symkey(const Term& derivation);
Term cat(std::vector<Term> parts);
Term hash_of(std::vector<Term> parts);
Term senc(const Term& key, const Term& payload);
Term aenc(const Term& key, const Term& payload);
Term sig(const Term& key, const Term& payload);

// Rebuilds a term bottom-up through the checked constructors; the result is
// structurally normalized (DhShared exponents sorted) and idempotent.
Term canonicalize(const Term& t);

std::ostream& operator<<(std::ostream& os, const Term& t);

}  // namespace bindlab
