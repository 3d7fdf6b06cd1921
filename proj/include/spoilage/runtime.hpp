#pragma once

namespace spoilage {

/// Keeps freed network buffers in the heap instead of returning them to the
/// OS. Training allocates and frees the same few hundred-kilobyte matrices
/// every update; with the default glibc thresholds each one is a fresh
/// mmap and a round of page faults. Call once at program start. No effect
/// outside glibc.
void tune_allocator();

}  // namespace spoilage
