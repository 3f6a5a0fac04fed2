#pragma once

#include <json.hpp>

#include "plab/jetmodel.hpp"
#include "plab/pasting.hpp"
#include "plab/sympoly.hpp"

namespace plab::io {

// Stable JSON forms. Rationals are "p/q" strings with "/q" omitted when the
// denominator is 1; multi-indices are arrays of naturals; the normal index h
// and the plane indices i, j are 1-based on the wire.

nlohmann::json frame_to_json(const Frame& fr);
Frame frame_from_json(const nlohmann::json& j);

nlohmann::json hompoly_to_json(const HomPoly& f);
HomPoly hompoly_from_json(const nlohmann::json& j);

nlohmann::json jetpoint_to_json(const jet::JetPoint& p);
jet::JetPoint jetpoint_from_json(const nlohmann::json& j);

nlohmann::json section_to_json(const pasting::Section& s);
pasting::Section section_from_json(const nlohmann::json& j);

}  // namespace plab::io
