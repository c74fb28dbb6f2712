typedef uint8_t state_t[4][4];
#define Nb 4
#define Nr 10
#define AES_KEYLEN 16
#define AES_keyExpSize 176

void AddRoundKey(uint8_t round, state_t state, const uint8_t* RoundKey)
{
uint8_t i, j;
uint8_t RoundKey_local[AES_keyExpSize];
for (i = 0; i < AES_keyExpSize; ++i)
{
#pragma HLS PIPELINE II=1
    RoundKey_local[i] = RoundKey[i];
}
for (i = 0; i < 4; ++i)
{
    for (j = 0; j < 4; ++j)
    {
#pragma HLS PIPELINE II=1
        state[i][j] ^= RoundKey_local[(round * Nb * 4) + (i * Nb) + j];
    }
}
}
