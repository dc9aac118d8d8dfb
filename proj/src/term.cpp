#include "bindlab/term.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bindlab {

const char* kind_head(Kind k) {
  switch (k) {
    case Kind::Name: return "name";
    case Kind::Tag: return "tag";
    case Kind::Nonce: return "nonce";
    case Kind::Pms: return "pms";
    case Kind::DhExp: return "dh-exp";
    case Kind::DhPub: return "dh-pub";
    case Kind::DhShared: return "dh-shared";
    case Kind::PubKey: return "pubk";
    case Kind::PrivKey: return "privk";
    case Kind::SymKey: return "symkey";
    case Kind::Tuple: return "cat";
    case Kind::Hash: return "hash";
    case Kind::SymEnc: return "senc";
    case Kind::AsymEnc: return "aenc";
    case Kind::Sig: return "sig";
  }
  return "?";
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  // 64-bit FNV-1a style step, good enough for container hashing.
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

Term Term::make(Kind k, std::string text, std::vector<Term> parts) {
  std::size_t h = mix(0x42, static_cast<std::size_t>(k));
  for (char c : text) h = mix(h, static_cast<unsigned char>(c));
  int d = 1;
  for (const Term& p : parts) {
    h = mix(h, p.hash());
    d = std::max(d, p.depth() + 1);
  }
  auto n = std::make_shared<Node>(Node{k, std::move(text), std::move(parts), h, d});
  return Term(std::move(n));
}

bool Term::is_atom() const {
  switch (kind()) {
    case Kind::Name:
    case Kind::Tag:
    case Kind::Nonce:
    case Kind::Pms:
    case Kind::DhExp:
    case Kind::PubKey:
    case Kind::PrivKey:
      return true;
    default:
      return false;
  }
}

bool Term::operator==(const Term& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  if (node_->hash != o.node_->hash) return false;
  if (node_->kind != o.node_->kind || node_->text != o.node_->text) return false;
  if (node_->parts.size() != o.node_->parts.size()) return false;
  for (std::size_t i = 0; i < node_->parts.size(); ++i)
    if (node_->parts[i] != o.node_->parts[i]) return false;
  return true;
}

std::strong_ordering Term::operator<=>(const Term& o) const {
  if (node_ == o.node_) return std::strong_ordering::equal;
  if (auto c = kind() <=> o.kind(); c != 0) return c;
  if (auto c = text() <=> o.text(); c != 0) return c;
  if (auto c = arity() <=> o.arity(); c != 0) return c;
  for (std::size_t i = 0; i < arity(); ++i)
    if (auto c = part(i) <=> o.part(i); c != 0) return c;
  return std::strong_ordering::equal;
}

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

Term name(std::string_view id) { return Term::make(Kind::Name, std::string(id), {}); }
Term tag(std::string_view literal) { return Term::make(Kind::Tag, std::string(literal), {}); }
Term nonce(std::string_view id) { return Term::make(Kind::Nonce, std::string(id), {}); }
Term pms(std::string_view id) { return Term::make(Kind::Pms, std::string(id), {}); }
Term dh_exp(std::string_view id) { return Term::make(Kind::DhExp, std::string(id), {}); }

Term dh_pub(const Term& exp) {
  require(exp.valid() && exp.kind() == Kind::DhExp, "dh-pub takes a dh-exp");
  return Term::make(Kind::DhPub, "", {exp});
}

Term dh_shared(const Term& a, const Term& b) {
  require(a.valid() && a.kind() == Kind::DhExp && b.valid() && b.kind() == Kind::DhExp,
          "dh-shared takes two dh-exp");
  if (b < a) return Term::make(Kind::DhShared, "", {b, a});
  return Term::make(Kind::DhShared, "", {a, b});
}

Term pubk(std::string_view owner) { return Term::make(Kind::PubKey, std::string(owner), {}); }
Term privk(std::string_view owner) { return Term::make(Kind::PrivKey, std::string(owner), {}); }
Term symkey(const Term& derivation) {
  require(derivation.valid(), "symkey takes a term");
  return Term::make(Kind::SymKey, "", {derivation});
}

Term cat(std::vector<Term> parts) {
  require(parts.size() >= 2, "cat takes at least two parts");
  return Term::make(Kind::Tuple, "", std::move(parts));
}

Term hash_of(std::vector<Term> parts) {
  require(!parts.empty(), "hash takes at least one part");
  return Term::make(Kind::Hash, "", std::move(parts));
}

Term senc(const Term& key, const Term& payload) {
  require(key.valid() && payload.valid(), "senc takes key and payload");
  return Term::make(Kind::SymEnc, "", {key, payload});
}

Term aenc(const Term& key, const Term& payload) {
  require(key.valid() && key.kind() == Kind::PubKey, "aenc key must be a pubk");
  return Term::make(Kind::AsymEnc, "", {key, payload});
}

Term sig(const Term& key, const Term& payload) {
  require(key.valid() && key.kind() == Kind::PrivKey, "sig key must be a privk");
  return Term::make(Kind::Sig, "", {key, payload});
}

Term canonicalize(const Term& t) {
  if (t.is_atom()) return t;
  std::vector<Term> parts;
  parts.reserve(t.arity());
  for (const Term& p : t.parts()) parts.push_back(canonicalize(p));
  switch (t.kind()) {
    case Kind::DhPub: return dh_pub(parts[0]);
    case Kind::DhShared: return dh_shared(parts[0], parts[1]);
    case Kind::SymKey: return symkey(parts[0]);
    case Kind::Tuple: return cat(std::move(parts));
    case Kind::Hash: return hash_of(std::move(parts));
    case Kind::SymEnc: return senc(parts[0], parts[1]);
    case Kind::AsymEnc: return aenc(parts[0], parts[1]);
    case Kind::Sig: return sig(parts[0], parts[1]);
    default: return t;
  }
}

namespace {

void quote_into(std::ostream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    if (c == '"' || c == '\\') os << '\\';
    os << c;
  }
  os << '"';
}

void print_into(std::ostream& os, const Term& t) {
  if (!t.valid()) {
    os << "(invalid)";
    return;
  }
  os << '(' << kind_head(t.kind());
  if (t.is_atom()) {
    os << ' ';
    quote_into(os, t.text());
  } else {
    for (const Term& p : t.parts()) {
      os << ' ';
      print_into(os, p);
    }
  }
  os << ')';
}

}  // namespace

std::string Term::str() const {
  std::ostringstream os;
  print_into(os, *this);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Term& t) {
  print_into(os, t);
  return os;
}

}  // namespace bindlab
