#pragma once

#include <string>

#include "wedgetact/image.hpp"

namespace wedgetact {

/// 8-bit RGB PNG. Reading converts grayscale/palette/alpha inputs to RGB.
void write_png(const std::string& path, const SensorImage& img);
SensorImage read_png(const std::string& path);

/// Masks persist as 1-bit grayscale PNGs.
void write_mask_png(const std::string& path, const ContactMask& mask);
ContactMask read_mask_png(const std::string& path);

/// Run-length mask serialization: one "y,x_start,length" row per run.
void write_mask_rle_csv(const std::string& path, const ContactMask& mask);
ContactMask read_mask_rle_csv(const std::string& path);

}  // namespace wedgetact
