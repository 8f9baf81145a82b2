#pragma once

#include <map>
#include <string>

#include "ringspice/model.hpp"

namespace ringspice {

using model_map = std::map<std::string, mos_model_params>;

// Parse a model-card file: one [name] section per card, key = value lines,
// '#' or '*' comments. Unknown keys are an error. Every card is validated.
model_map parse_model_cards(const std::string& text);
model_map load_model_cards(const std::string& path);
std::string format_model_cards(const model_map& models);

// Built-in cards; identical text is shipped under cards/.
const std::string& default_cards_text();  // generic 0.35um long-channel pair
const std::string& hef4007_cards_text();  // generic metal-gate discrete pair

model_map default_cards();

// Set one key on an existing card; same key names as the file format.
void set_card_field(mos_model_params& p, const std::string& key,
                    const std::string& value, int line = 0);

} // namespace ringspice
