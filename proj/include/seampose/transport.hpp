#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <fstream>
#include <iostream>
#include <mutex>

#include "seampose/errors.hpp"

namespace seampose {

/// Ordered byte stream abstractions. The sensing link is modeled as any
/// ordered transport: file, pipe, or in-process buffer.
class ByteSink {
 public:
  virtual ~ByteSink() = default;
  virtual void write(const uint8_t* data, size_t n) = 0;
  virtual void flush() {}
  virtual void close() {}
};

class ByteSource {
 public:
  virtual ~ByteSource() = default;
  /// Blocks until at least one byte is available; returns 0 at end of stream.
  virtual size_t read(uint8_t* out, size_t max) = 0;
};

class FileByteSink : public ByteSink {
 public:
  explicit FileByteSink(const std::string& path) : f_(path, std::ios::binary) {
    if (!f_) throw DataError("cannot open for writing: " + path);
  }
  void write(const uint8_t* data, size_t n) override {
    if (!f_) throw TransportClosed("file sink closed");
    f_.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  void flush() override { f_.flush(); }
  void close() override { f_.close(); }

 private:
  std::ofstream f_;
};

class FileByteSource : public ByteSource {
 public:
  explicit FileByteSource(const std::string& path) : f_(path, std::ios::binary) {
    if (!f_) throw DataError("cannot open for reading: " + path);
  }
  size_t read(uint8_t* out, size_t max) override {
    f_.read(reinterpret_cast<char*>(out), static_cast<std::streamsize>(max));
    return static_cast<size_t>(f_.gcount());
  }

 private:
  std::ifstream f_;
};

class StdoutByteSink : public ByteSink {
 public:
  void write(const uint8_t* data, size_t n) override {
    std::cout.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  void flush() override { std::cout.flush(); }
};

class StdinByteSource : public ByteSource {
 public:
  size_t read(uint8_t* out, size_t max) override {
    std::cin.read(reinterpret_cast<char*>(out), static_cast<std::streamsize>(max));
    return static_cast<size_t>(std::cin.gcount());
  }
};

/// In-process pipe for tests and faster-than-real-time replay: writer and
/// reader may live on different threads.
class MemoryPipe : public ByteSink, public ByteSource {
 public:
  void write(const uint8_t* data, size_t n) override {
    std::lock_guard<std::mutex> lock(mu_);
    if (closed_) throw TransportClosed("memory pipe closed");
    buf_.insert(buf_.end(), data, data + n);
    cv_.notify_all();
  }

  size_t read(uint8_t* out, size_t max) override {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [&] { return !buf_.empty() || closed_; });
    const size_t n = std::min(max, buf_.size());
    for (size_t i = 0; i < n; ++i) out[i] = buf_[i];
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<long>(n));
    return n;
  }

  void close() override {
    std::lock_guard<std::mutex> lock(mu_);
    closed_ = true;
    cv_.notify_all();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<uint8_t> buf_;
  bool closed_ = false;
};

}  // namespace seampose
