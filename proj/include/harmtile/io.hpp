#pragma once
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "harmtile/complex.hpp"

namespace harmtile {

// Parse the input document schema:
//   { "vertices": [{"id","x","y"}], "edges": [{"u","v","c"}],
//     "cells": [[ids]], "boundary": {"loops":[[ids]], "alphaArcs":[[ids]],
//     "betaArcs":[[ids]], "k": number} }
// Numeric fields accept JSON numbers or exact rationals as "p/q" strings.
RawComplex parseComplex(const nlohmann::json& doc);
RawComplex parseComplexText(const std::string& text);
RawComplex loadComplexFile(const std::string& path);

nlohmann::json emitComplex(const RawComplex& raw);

// "p/q" or plain number -> double
double numberField(const nlohmann::json& v, const std::string& what);

void writeTextFile(const std::string& path, const std::string& text);
std::string readTextFile(const std::string& path);

extern const char* kVersion;

}  // namespace harmtile
