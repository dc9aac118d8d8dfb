#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "bindlab/knowledge.hpp"
#include "bindlab/term.hpp"
#include "oracle_sweep.hpp"

using namespace bindlab;

TEST_CASE("tuples, signatures and key wrappers decompose on insertion") {
  KnowledgeBase kb;
  kb.add(cat({nonce("a"), cat({name("b"), pms("p")})}));
  CHECK(kb.contains(nonce("a")));
  CHECK(kb.contains(pms("p")));

  kb.add(sig(privk("s"), nonce("payload")));
  CHECK(kb.contains(nonce("payload")));
  CHECK_FALSE(kb.contains(privk("s")));

  // the key wrapper is transparent, but the hash below it stays one-way
  kb.add(symkey(hash_of({nonce("seed")})));
  CHECK(kb.contains(hash_of({nonce("seed")})));
  CHECK_FALSE(kb.contains(nonce("seed")));
}

TEST_CASE("symmetric ciphertexts open exactly when their key is derivable") {
  KnowledgeBase kb;
  Term k = symkey(hash_of({nonce("n1")}));
  kb.add(senc(k, nonce("m")));
  CHECK_FALSE(kb.contains(nonce("m")));
  CHECK_FALSE(kb.derivable(nonce("m")));

  // learning n1 makes the key composable; the stored ciphertext must open
  kb.add(nonce("n1"));
  CHECK(kb.contains(nonce("m")));
}

TEST_CASE("asymmetric ciphertexts open on possession of the private half") {
  KnowledgeBase kb;
  kb.add(aenc(pubk("s"), nonce("m")));
  CHECK_FALSE(kb.derivable(nonce("m")));
  kb.add(privk("s"));
  CHECK(kb.contains(nonce("m")));
}

TEST_CASE("chained ciphertexts open in one saturation pass") {
  KnowledgeBase kb;
  kb.add(senc(symkey(nonce("k2")), nonce("deep")));
  kb.add(senc(symkey(nonce("k1")), nonce("k2")));
  kb.add(nonce("k1"));
  CHECK(kb.contains(nonce("deep")));
}

TEST_CASE("hash is one-way") {
  KnowledgeBase kb;
  kb.add(hash_of({nonce("x"), name("a")}));
  CHECK_FALSE(kb.derivable(nonce("x")));
  // but a hash of known parts is composable
  kb.add(nonce("x"));
  CHECK(kb.derivable(hash_of({nonce("x"), name("a")})));
  CHECK(kb.derivable(hash_of({nonce("x"), nonce("x")})));
}

TEST_CASE("dh shared secrets need one exponent plus the other public half") {
  KnowledgeBase kb;
  Term x = dh_exp("x"), y = dh_exp("y");
  kb.add(x);
  CHECK_FALSE(kb.derivable(dh_shared(x, y)));
  kb.add(dh_pub(y));
  CHECK(kb.derivable(dh_shared(x, y)));
  // commutativity is structural
  CHECK(kb.derivable(dh_shared(y, x)));
  CHECK(dh_shared(x, y) == dh_shared(y, x));
  // the public half alone never yields the secret
  KnowledgeBase kb2;
  kb2.add(dh_pub(x));
  kb2.add(dh_pub(y));
  CHECK_FALSE(kb2.derivable(dh_shared(x, y)));
}

TEST_CASE("names and tags are public, other atoms must be possessed") {
  KnowledgeBase kb;
  CHECK(kb.derivable(name("anyone")));
  CHECK(kb.derivable(tag("whatever")));
  CHECK_FALSE(kb.derivable(nonce("n")));
  CHECK_FALSE(kb.derivable(pubk("s")));  // public keys are distributed, not free
  kb.add(pubk("s"));
  CHECK(kb.derivable(aenc(pubk("s"), name("hi"))));
}

TEST_CASE("forbid is a tripwire, not a filter") {
  KnowledgeBase kb;
  kb.forbid(privk("ca"));
  CHECK_THROWS_AS(kb.add(privk("ca")), ScenarioBroken);
  // indirect arrival trips it too
  KnowledgeBase kb2;
  kb2.forbid(pms("secret"));
  CHECK_THROWS_AS(kb2.add(cat({name("x"), pms("secret")})), ScenarioBroken);
  // forbidding something already known is itself a setup error
  KnowledgeBase kb3;
  kb3.add(nonce("n"));
  CHECK_THROWS_AS(kb3.forbid(nonce("n")), ScenarioBroken);
}

TEST_CASE("origination assumptions are sort-checked") {
  CHECK(assumption_well_formed({AssumptionKind::NonOriginating, privk("ca")}));
  CHECK(assumption_well_formed({AssumptionKind::UniquelyOriginating, nonce("n")}));
  CHECK_FALSE(assumption_well_formed({AssumptionKind::NonOriginating, nonce("n")}));
  CHECK_FALSE(assumption_well_formed({AssumptionKind::UniquelyOriginating, privk("ca")}));
  CHECK(assumption_well_formed({AssumptionKind::PenetratorNonOriginating, pms("p")}));

  KnowledgeBase kb;
  kb.assume({AssumptionKind::NonOriginating, privk("ca")});
  CHECK_THROWS_AS(kb.add(privk("ca")), ScenarioBroken);
  // penetrator-non-origination may be learned from honest traffic
  KnowledgeBase kb2;
  kb2.assume({AssumptionKind::PenetratorNonOriginating, nonce("srv")});
  CHECK(kb2.add(nonce("srv")));
}

TEST_CASE("derivation proofs reconstruct the target") {
  KnowledgeBase kb;
  kb.add(nonce("n"));
  kb.add(pubk("s"));
  Term target = aenc(pubk("s"), cat({name("a"), nonce("n")}));
  auto proof = kb.derive_proof(target);
  REQUIRE(proof);
  CHECK(proof->term == target);
  CHECK(proof->rule == Derivation::Rule::Enc);
  REQUIRE(proof->premises.size() == 2);
  CHECK(proof->premises[0]->rule == Derivation::Rule::InKb);
  CHECK(proof->premises[1]->rule == Derivation::Rule::Pair);
  CHECK_FALSE(kb.derive_proof(privk("s")));
}

TEST_CASE("fingerprint is order-independent and content-sensitive") {
  KnowledgeBase a, b;
  a.add(nonce("1"));
  a.add(nonce("2"));
  b.add(nonce("2"));
  b.add(nonce("1"));
  CHECK(a.fingerprint() == b.fingerprint());
  b.add(nonce("3"));
  CHECK(a.fingerprint() != b.fingerprint());
}

TEST_CASE("saturate is idempotent on a closed set") {
  KnowledgeBase kb;
  kb.add(senc(symkey(nonce("k")), nonce("m")));
  std::size_t before = kb.size();
  kb.saturate();
  CHECK(kb.size() == before);
  kb.add(nonce("k"));
  CHECK(kb.contains(nonce("m")));
}

// ---------------------------------------------------------------------------
// Exhaustive cross-check against the independent closure oracle: every
// knowledge base of at most 6 entries drawn from a fixed 10-term pool over a
// 10-atom vocabulary, every target in the subterm-closed universe. The
// vocabulary and sweep live in oracle_sweep.hpp, shared with the acceptance
// gate so both check the identical frozen space.
// ---------------------------------------------------------------------------

TEST_CASE("engine agrees with the brute-force closure oracle on all small kbs") {
  REQUIRE(oracle::SweepVocab{}.pool().size() == 10);
  oracle::SweepStats st = oracle::run_exhaustive_sweep(6);
  for (const std::string& m : st.mismatches) {
    CAPTURE(m);
    CHECK(false);
  }
  CHECK(st.mismatches.empty());
  CHECK(st.kbs == 848);  // sum over k=0..6 of C(10,k)
  MESSAGE("oracle sweep: ", st.kbs, " knowledge bases x ", st.universe_size, " targets = ",
          st.queries, " queries");
}
