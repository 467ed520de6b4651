#pragma once

#include <string_view>

#include "chorgate/core/choreography.hpp"
#include "chorgate/core/diagnostic.hpp"

namespace chorgate::bpmn {

inline constexpr std::string_view kModelNamespace = "http://www.omg.org/spec/BPMN/20100524/MODEL";

/// Reads the interaction-modeling subset of a BPMN 2.0 choreography document.
///
/// Interpreted elements: definitions, message, choreography, participant,
/// messageFlow, choreographyTask (initiatingParticipantRef, one or two
/// messageFlowRef children, standardLoopCharacteristics), sequenceFlow,
/// exclusiveGateway, parallelGateway, startEvent and endEvent. Condition
/// expressions are ignored. Elements that change control flow in ways this
/// subset cannot express (inclusive/event-based/complex gateways,
/// sub-choreographies, call choreographies, intermediate and timer events)
/// are errors; anything else unrecognized yields a warning.
///
/// A successful result always passes validate_choreography. Diagnostics carry
/// an element path and the source line.
Result<ChoreographyModel> parse_choreography(std::string_view document);

}  // namespace chorgate::bpmn
