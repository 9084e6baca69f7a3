#include "core/melfile.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "core/errors.hpp"

namespace vc {

namespace {
constexpr char kMelMagic[8] = {'V', 'C', 'M', 'E', 'L', '0', '0', '1'};
}

void save_mel_file(const MelFile& mf, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::IoError, "cannot write " + path);
  out.write(kMelMagic, sizeof(kMelMagic));
  uint32_t header[5] = {static_cast<uint32_t>(mf.mel.frame_count()),
                        static_cast<uint32_t>(mf.mel.num_mels()),
                        static_cast<uint32_t>(mf.fft_size),
                        static_cast<uint32_t>(mf.hop_size),
                        static_cast<uint32_t>(mf.sample_rate)};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(mf.mel.values.data()),
            static_cast<std::streamsize>(mf.mel.values.size() *
                                         sizeof(double)));
  require(out.good(), ErrorCode::IoError, "write failed for " + path);
}

MelFile load_mel_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::FileNotFound, "cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  require(in.good() && std::memcmp(magic, kMelMagic, 8) == 0,
          ErrorCode::CorruptHeader, path + ": not a mel feature file");
  uint32_t header[5];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  require(in.good(), ErrorCode::CorruptHeader, path + ": truncated header");

  MelFile mf;
  mf.mel.values = Matrix(header[0], header[1]);
  mf.fft_size = static_cast<int>(header[2]);
  mf.hop_size = static_cast<int>(header[3]);
  mf.sample_rate = static_cast<int>(header[4]);
  in.read(reinterpret_cast<char*>(mf.mel.values.data()),
          static_cast<std::streamsize>(mf.mel.values.size() *
                                       sizeof(double)));
  require(in.good(), ErrorCode::CorruptHeader, path + ": truncated data");
  return mf;
}

}  // namespace vc
