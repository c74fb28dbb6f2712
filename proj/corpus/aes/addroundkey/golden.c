typedef uint8_t state_t;
#define Nb 4
#define Nr 10
#define AES_KEYLEN 16
#define AES_keyExpSize 176

static void AddRoundKey(uint8_t round, state_t state[4][4], const uint8_t RoundKey[AES_KEYLEN]) {
  uint8_t i, j;
  uint8_t base = round * Nb * 4;
  for (i = 0; i < 4; ++i) {
    for (j = 0; j < 4; ++j) {
      state[i][j] ^= RoundKey[base + (i * Nb) + j];
    }
  }
}
