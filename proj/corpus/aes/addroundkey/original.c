typedef uint8_t state_t[4][4];
#define Nb 4
#define Nr 10
#define AES_KEYLEN 16
#define AES_keyExpSize 176

static void AddRoundKey(uint8_t round, state_t* state, const uint8_t* RoundKey)
{
  uint8_t i,j;
  for (i = 0; i < 4; ++i)
  {
    for (j = 0; j < 4; ++j)
    {
      (*state)[i][j] ^= RoundKey[(round * Nb * 4) + (i * Nb) + j];
    }
  }
}
