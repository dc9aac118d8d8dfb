#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bindlab/term.hpp"

namespace bindlab {

// Raised when a scenario violates its own setup: a non-originating secret
// physically entered the knowledge base, or a delivery was not derivable.
struct ScenarioBroken : std::logic_error {
  explicit ScenarioBroken(const std::string& what) : std::logic_error(what) {}
};

enum class AssumptionKind : std::uint8_t {
  NonOriginating,
  UniquelyOriginating,
  UniquelyGenerated,
  PenetratorNonOriginating,
};

struct OriginationAssumption {
  AssumptionKind kind;
  Term subject;
};

// Subject sort restrictions: NonOriginating applies to key-like atoms,
// the freshness kinds to freshly chosen atoms.
bool assumption_well_formed(const OriginationAssumption& a);

// One step of a derivation, used to render `derive` proofs.
struct Derivation {
  enum class Rule { InKb, Public, Pair, HashRule, Enc, SignRule, PubHalf, KeyWrap, DhCombine };
  Rule rule;
  Term term;
  std::vector<std::shared_ptr<Derivation>> premises;
};

// A set of terms closed under Dolev-Yao decomposition. Insertions saturate
// incrementally: tuples split, signatures reveal payloads, ciphertexts open
// once their key becomes derivable, and a held exponent plus an observed
// public half yields the DH shared secret. Hash is never inverted.
class KnowledgeBase {
 public:
  // Inserting any subject declared NonOriginating (either flavor with an
  // insert ban) throws ScenarioBroken. PenetratorNonOriginating subjects may
  // be learned from honest traffic, so they are not banned.
  void assume(const OriginationAssumption& a);
  void forbid(const Term& atom);

  // Returns true if the term (or any part uncovered by saturation) was new.
  bool add(const Term& t);

  bool contains(const Term& t) const { return index_.count(t) != 0; }
  std::size_t size() const { return items_.size(); }
  const std::vector<Term>& items() const { return items_; }

  // Explicit fixed-point pass; add() already maintains saturation, so this
  // only exists to make the closure property directly testable.
  void saturate();

  // Composition check over the saturated set: tupling, hashing, encrypting
  // and signing with derivable keys, public halves from exponents, symmetric
  // keys from their derivation, DH secrets from one exponent plus the other
  // public half. Tags and names are public vocabulary.
  bool derivable(const Term& target) const;
  std::shared_ptr<Derivation> derive_proof(const Term& target) const;

  // Order-independent digest of the current contents.
  std::uint64_t fingerprint() const;

 private:
  bool insert(const Term& t, std::vector<Term>& work);
  void close(std::vector<Term>& work);
  bool key_openable(const Term& key) const;

  std::vector<Term> items_;
  std::unordered_set<Term, TermHash> index_;
  std::vector<Term> forbidden_;
  std::vector<Term> pending_enc_;  // ciphertexts whose key was not yet derivable
  std::vector<OriginationAssumption> assumptions_;
};

}  // namespace bindlab
