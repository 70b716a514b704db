#ifndef MODLIE_JSON_IO_HPP
#define MODLIE_JSON_IO_HPP

#include <json.hpp>

#include "modlie/divpow.hpp"
#include "modlie/families.hpp"
#include "modlie/pstruct.hpp"

namespace modlie {

// insertion-ordered documents keep report and table ordering deterministic
using Json = nlohmann::ordered_json;

Json algebra_to_json(const SuperAlgebra& g);
SuperAlgebra algebra_from_json(const Json& j);

Json pmap_to_json(const SuperAlgebra& g, const PMap& pm);
PMap pmap_from_json(const SuperAlgebra& g, const Json& j);

Json cocycle_to_json(const SuperAlgebra& g, const Cocycle& c);
Cocycle cocycle_from_json(const SuperAlgebra& g, const Json& j);

LemmaExpectation expectation_from_json(const Json& j);

// "coeff*name + ..." over the algebra's basis names, e.g. "-lambda*h3".
Vec parse_vector_combo(const SuperAlgebra& g, const std::string& text);

// Divided-power element / descriptor textual forms:
//   element     2*u1^(2)*th1*th2 + t
//   descriptor  O(m=1;N=[1]|n=2;p=3)           (optionally ;vars=[ph,qh,t])
std::string descriptor_header(const DPDescriptor& d);
DescriptorPtr parse_descriptor_header(const std::string& text, RingPtr ring = nullptr);
DPElement parse_dp(const DescriptorPtr& d, const std::string& text);

// FNV-1a 64-bit content digest, hex encoded.
std::string fnv1a_digest(const std::string& bytes);
std::string file_digest(const std::string& path);

std::string read_file(const std::string& path);          // throws ParseError
Json parse_json_file(const std::string& path);           // throws ParseError
SuperAlgebra load_algebra_file(const std::string& path);

struct FixtureBundle {
    SuperAlgebra algebra;
    Cocycle cocycle;
    LemmaExpectation expect;
    std::map<std::string, std::string> digests;
};

// fixtures/<name>/{algebra.json, cocycle_<k>.json, expect.json}
FixtureBundle load_fixture(const std::string& dir, const std::string& cocycle_name);

}  // namespace modlie

#endif
