#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "ltlsyn/automaton.hpp"
#include "ltlsyn/learning.hpp"
#include "ltlsyn/oracle.hpp"
#include "ltlsyn/plmdp.hpp"
#include "ltlsyn/product.hpp"

namespace ltlsyn {

// Insertion-ordered documents keep every export byte-stable.
using Json = nlohmann::ordered_json;

// Codecs. Loaders throw std::runtime_error naming the offending field;
// to_json/from_json pairs round-trip structurally.
PLMDP plmdp_from_json(const Json& doc);
Json plmdp_to_json(const PLMDP& m);

GridSpec grid_from_json(const Json& doc);
Json grid_to_json(const GridSpec& g);

LDGBA ldgba_from_json(const Json& doc);
Json ldgba_to_json(const LDGBA& a);

/** Reads a model file holding either an explicit model or a grid document
 * (recognized by its "width" field), expanding grids. */
PLMDP load_model_file(const std::string& path);
LDGBA load_automaton_file(const std::string& path);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);
void write_text_file(const std::string& path, const std::string& text);

/** Shortest exact decimal form, the CSV float convention. */
std::string format_double(double v);

/** "name" for model actions, "eps->q" for automaton jumps. */
std::string encode_action(const ProductEnv& env, const ProductAction& u);
ProductAction decode_action(const ProductEnv& env, const std::string& text);

/** Greedy policy keyed by the canonical product-state encoding, sorted. */
Json policy_to_json(const ProductEnv& env, const Policy& pol);
Json values_to_json(const ProductEnv& env, const ValueMap& values);

Json product_to_json(const ProductEnv& env, const ExplicitProduct& p);

/** End components, their classes, and the per-state maximum probability of
 * reaching an accepting one. */
Json oracle_report_json(const ProductEnv& env, const ExplicitProduct& p,
                        const std::vector<EndComponent>& mecs,
                        const ReachabilityResult& reach);

std::string curve_csv(const std::vector<CurvePoint>& curve);

}  // namespace ltlsyn
