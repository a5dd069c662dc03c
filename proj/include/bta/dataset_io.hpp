#pragma once

#include <filesystem>

#include "bta/synth.hpp"

namespace bta {

/// Dataset directory layout: manifest.json (name, shape, band table, channel
/// list), samples.bin (binary little-endian sample records, versioned), and
/// montage.txt ("name x y z" lines).
void save_dataset(const Dataset& ds, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

/// Plain-text recording file:
///   channels F3 F4 ...
///   rate 128
///   group task-1
///   label 1        (optional; omit or '-' when unknown)
///   signal
///   <one line of T samples per channel, channel order as declared>
Recording load_recording(const std::filesystem::path& path);

/// All *.rec files in a directory, sorted by filename.
std::vector<Recording> load_recordings_dir(const std::filesystem::path& dir);

void save_recording(const Recording& rec, const std::filesystem::path& path);

}  // namespace bta
