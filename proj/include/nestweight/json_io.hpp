#pragma once

#include <string>

#include "json.hpp"
#include "nestweight/nested_word.hpp"
#include "nestweight/semiring.hpp"
#include "nestweight/text.hpp"
#include "nestweight/wnwa.hpp"
#include "nestweight/wpa.hpp"

namespace nestweight {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);

Word word_from_json(const Json& j);
Json word_to_json(const Word& w);

NestedWord nested_word_from_json(const Json& j);
Json nested_word_to_json(const NestedWord& nw);

Wnwa wnwa_from_json(const Json& j);
Json wnwa_to_json(const Wnwa& a);

Text text_from_json(const Json& j);
Json text_to_json(const Text& t);

Wpa wpa_from_json(const Json& j);
Json wpa_to_json(const Wpa& a);

}  // namespace nestweight
