#include <benchmark/benchmark.h>

#include <random>

#include "stegoguard/attack_lab.hpp"
#include "stegoguard/codec.hpp"
#include "stegoguard/stego.hpp"

using namespace stegoguard;

namespace {

PixelImage noise_image(std::size_t side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PixelImage img(side, side, Rgb{0, 0, 0});
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const auto v = rng();
    img[i] = Rgb{static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v >> 16)};
  }
  return img;
}

std::string message_of(std::size_t len) {
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += static_cast<char>(0x21 + i % 90);
  return s;
}

void BM_Embed(benchmark::State& state) {
  const PixelImage cover = noise_image(static_cast<std::size_t>(state.range(0)), 1);
  const SecretMessage message(message_of(static_cast<std::size_t>(state.range(1))));
  for (auto _ : state) benchmark::DoNotOptimize(embed(cover, message));
}
BENCHMARK(BM_Embed)->Args({64, 8})->Args({256, 32})->Args({512, 64});

void BM_Extract(benchmark::State& state) {
  const PixelImage cover = noise_image(static_cast<std::size_t>(state.range(0)), 2);
  const auto [stego, key] = embed(cover, SecretMessage(message_of(static_cast<std::size_t>(state.range(1)))));
  for (auto _ : state) benchmark::DoNotOptimize(extract(stego, key));
}
BENCHMARK(BM_Extract)->Args({64, 8})->Args({256, 32})->Args({512, 64});

void BM_Keyspace(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(keyspace_size(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Keyspace)->Arg(12)->Arg(40)->Arg(256);

void BM_Codec(benchmark::State& state) {
  const auto format = state.range(0) == 0 ? ImageFormat::Png : ImageFormat::Bmp;
  const PixelImage img = noise_image(256, 3);
  for (auto _ : state) benchmark::DoNotOptimize(load_image(save_image(img, format)));
  state.SetLabel(state.range(0) == 0 ? "png" : "bmp");
}
BENCHMARK(BM_Codec)->Arg(0)->Arg(1);

// Full 12-digit table-pattern search against a 64x64 stego image.
void BM_BruteForce12(benchmark::State& state) {
  const SecretMessage message("Wok");
  const auto stego = embed(synthetic_cover(64, 64, 1), message).stego;
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_enumerate(stego, message, 12));
}
BENCHMARK(BM_BruteForce12)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
