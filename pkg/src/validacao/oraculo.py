"""
Oráculo Analítico - EdcaSim

Duas estações saturadas com janela de contenção congelada em W
(cw_min = cw_max = W, sorteio uniforme em {0..W-1}).

- Enumeração exata da matriz W x W de sorteios de uma rodada
- Cadeia de Markov do backoff residual: o perdedor de cada rodada
  carrega a diferença dos sorteios para a rodada seguinte
- Comparação com 10^6 rodadas simuladas do mesmo cenário, divididas
  entre replicações executadas em paralelo

Uso:
    from src.validacao.oraculo import comparar_com_simulacao
    resultado = comparar_com_simulacao(16, rodadas=1_000_000)
"""

import logging
import math
import multiprocessing
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

import numpy as np

from src.core.cenarios import parse_scenario
from src.core.meio_fisico import FrameKind, frame_airtime
from src.core.parametros import PhyParams
from src.core.simulacao import Simulacao

logger = logging.getLogger(__name__)

TOLERANCIA_PADRAO = 0.02
RODADAS_PADRAO = 1_000_000
REPLICACOES_PADRAO = 8


def _validar_janela(W: int) -> None:
    if isinstance(W, bool) or not isinstance(W, (int, np.integer)) or W < 1:
        raise ValueError(f"janela W deve ser inteiro >= 1 (atual: {W!r})")


def probabilidade_colisao_enumeracao(W: int) -> Fraction:
    """Fração exata dos pares (a, b) da matriz W x W com a == b."""
    _validar_janela(W)
    a, b = np.meshgrid(np.arange(W), np.arange(W), indexing='ij')
    return Fraction(int(np.count_nonzero(a == b)), W * W)


def cadeia_residual(W: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Matriz de transição e distribuição estacionária.

    Estado 0 = ambos sortearam agora (após colisão ou no início);
    estado r (1..W-1) = a outra estação carrega r slots congelados.
    Do estado r, um novo sorteio a leva a 0 se a == r e a |a - r|
    caso contrário.
    """
    _validar_janela(W)
    P = np.zeros((W, W))
    for a in range(W):
        for b in range(W):
            P[0, abs(a - b)] += 1.0 / (W * W)
    for r in range(1, W):
        for a in range(W):
            P[r, abs(a - r)] += 1.0 / W

    # pi (P - I) = 0 com sum(pi) = 1
    A = np.vstack([(P - np.eye(W)).T, np.ones(W)])
    b = np.zeros(W + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    return P, pi


def _por_estado(W: int, funcao) -> np.ndarray:
    valores = np.zeros(W)
    sorteios = np.arange(W)
    a, b = np.meshgrid(sorteios, sorteios, indexing='ij')
    valores[0] = float(np.mean(funcao(a, b)))
    for r in range(1, W):
        valores[r] = float(np.mean(funcao(sorteios, np.full(W, r))))
    return valores


def probabilidade_colisao_markov(W: int) -> float:
    _, pi = cadeia_residual(W)
    colide = _por_estado(W, lambda a, b: a == b)
    return float(pi @ colide)


def slots_medios_por_rodada(W: int) -> float:
    """Slots ociosos esperados antes da transmissão de cada rodada."""
    _, pi = cadeia_residual(W)
    return float(pi @ _por_estado(W, np.minimum))


def cenario_oraculo(W: int, duracao_s: float, tamanho: int = 1500, seed: int = 1) -> str:
    """Texto YAML do cenário de validação."""
    _validar_janela(W)
    texto = (
        f"name: oracle-w{W}\n"
        f"description: \"Duas estações DCF saturadas com CW congelada em {W}\"\n"
        f"mac_mode: dcf\n"
        f"duration_s: {duracao_s}\n"
        f"seed: {seed}\n"
        f"reps: 1\n"
        f"backoff_policy: exclusive\n"
        f"dcf:\n"
        f"  cw_min: {W}\n"
        f"  cw_max: {W}\n"
        f"stations:\n"
    )
    for sid in (1, 2):
        texto += (
            f"  - id: {sid}\n"
            f"    flows:\n"
            f"      - class: best-effort\n"
            f"        mode: saturated\n"
            f"        packet_size_bytes: {tamanho}\n"
        )
    return texto


def _duracao_limite_s(W: int, rodadas: int, tamanho: int, phy: PhyParams) -> float:
    """Teto de tempo virtual para 'rodadas' rodadas: a execução para antes, ao atingir o alvo."""
    rodada = (
        frame_airtime(FrameKind.DATA, tamanho, phy) + phy.sifs_us + frame_airtime(FrameKind.ACK, 0, phy)
        + phy.slot_time_us + phy.difs_us + W * phy.slot_time_us
    )
    return math.ceil(rodadas * rodada * 1.1) / 1_000_000 + 1.0


def _rodadas_replicacao(tarefa: Tuple[int, int, int, int]) -> Tuple[int, int]:
    """Uma replicação do oráculo: (rodadas, rodadas com colisão)."""
    W, alvo, tamanho, seed = tarefa
    duracao = _duracao_limite_s(W, alvo, tamanho, PhyParams())
    config = parse_scenario(cenario_oraculo(W, duracao, tamanho, seed))
    canal = Simulacao(config, seed=seed, apenas_contagem=True).executar_rodadas(alvo)
    return canal.rodadas_contencao, canal.rodadas_colisao


def comparar_com_simulacao(
    W: int,
    rodadas: int = RODADAS_PADRAO,
    seed: int = 1,
    tolerancia: float = TOLERANCIA_PADRAO,
    tamanho: int = 1500,
    replicacoes: int = REPLICACOES_PADRAO,
    workers: Optional[int] = None,
) -> Dict[str, Any]:
    """
    Simula o cenário do oráculo até somar 'rodadas' rodadas de contenção
    e compara a probabilidade de colisão com os dois valores analíticos.

    As rodadas são divididas entre replicações fixas (sementes seed+i),
    cada uma com ceil(rodadas / replicacoes) rodadas; o resultado não
    depende de quantos workers executam as replicações.
    workers=None usa todos os núcleos (limitado ao número de replicações).
    """
    _validar_janela(W)
    if rodadas < 1 or replicacoes < 1:
        raise ValueError(f"rodadas e replicacoes devem ser >= 1 (atual: {rodadas}, {replicacoes})")
    exata = probabilidade_colisao_enumeracao(W)
    markov = probabilidade_colisao_markov(W)

    alvo = -(-rodadas // replicacoes)
    tarefas = [(W, alvo, tamanho, seed + i) for i in range(replicacoes)]
    workers = min(workers or multiprocessing.cpu_count(), replicacoes)
    if workers > 1:
        with multiprocessing.Pool(processes=workers) as pool:
            parciais = pool.map(_rodadas_replicacao, tarefas)
    else:
        parciais = [_rodadas_replicacao(t) for t in tarefas]

    total = sum(r for r, _ in parciais)
    colisoes = sum(c for _, c in parciais)
    empirica: Optional[float] = colisoes / total if total else None
    diferenca = None if empirica is None else abs(empirica - float(exata))
    logger.info(
        "oráculo W=%d: exata=%.6f markov=%.6f simulada=%s (%d rodadas, %d replicações, %d workers)",
        W, float(exata), markov, f"{empirica:.6f}" if empirica is not None else "n/d", total, replicacoes, workers,
    )
    return {
        'W': W,
        'exata': float(exata),
        'exata_fracao': str(exata),
        'markov': markov,
        'slots_por_rodada': slots_medios_por_rodada(W),
        'simulada': empirica,
        'rodadas': total,
        'rodadas_colisao': colisoes,
        'replicacoes': replicacoes,
        'diferenca': diferenca,
        'tolerancia': tolerancia,
        'aprovado': diferenca is not None and diferenca <= tolerancia,
    }


__all__ = [
    'TOLERANCIA_PADRAO',
    'RODADAS_PADRAO',
    'REPLICACOES_PADRAO',
    'probabilidade_colisao_enumeracao',
    'cadeia_residual',
    'probabilidade_colisao_markov',
    'slots_medios_por_rodada',
    'cenario_oraculo',
    'comparar_com_simulacao',
]
