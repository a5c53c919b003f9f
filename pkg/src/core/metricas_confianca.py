"""
Confiança Entre Replicações - EdcaSim

Resume os atrasos médios de N sementes de um mesmo cenário: média das médias,
desvio amostral, CV e intervalo t-Student. O nível de consistência
classifica o CV (ALTA < 10%, MÉDIA < 25%, BAIXA acima disso).
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

# ============================================================================
# LIMIARES DE CV
# ============================================================================

CV_ALTA = 0.10
CV_MEDIA = 0.25


@dataclass(frozen=True)
class ResumoAmostral:
    n: int
    media: float
    desvio: float
    cv: float
    inferior: float
    superior: float
    nivel: float

    @property
    def consistencia(self) -> str:
        if self.n == 0:
            return 'INSUFICIENTE'
        if self.cv < CV_ALTA:
            return 'ALTA'
        return 'MÉDIA' if self.cv < CV_MEDIA else 'BAIXA'

    @property
    def margem(self) -> float:
        return self.superior - self.media


def resumir(valores: Sequence[float], confianca: float = 0.95) -> ResumoAmostral:
    """
    Resume uma amostra de médias por replicação.

    Com menos de duas amostras o intervalo colapsa na própria média (e vale 0.0
    sem amostras); o desvio só é definido a partir de duas.
    """
    amostra = np.asarray(list(valores), dtype=float)
    n = int(amostra.size)
    if n == 0:
        return ResumoAmostral(0, 0.0, 0.0, 0.0, 0.0, 0.0, confianca)

    media = float(amostra.mean())
    if n == 1:
        return ResumoAmostral(1, media, 0.0, 0.0, media, media, confianca)

    desvio = float(amostra.std(ddof=1))
    erro_padrao = desvio / np.sqrt(n)
    margem = float(stats.t.ppf(0.5 + confianca / 2, df=n - 1) * erro_padrao)
    cv = desvio / media if media > 0 else 0.0
    return ResumoAmostral(n, media, desvio, cv, media - margem, media + margem, confianca)


def calcular_intervalo_confianca(valores: Sequence[float], confianca: float = 0.95) -> Tuple[float, float, float]:
    """(media, inferior, superior) do intervalo t-Student."""
    r = resumir(valores, confianca)
    return r.media, r.inferior, r.superior


def analisar_consistencia(valores: Sequence[float]) -> Dict[str, Any]:
    r = resumir(valores)
    return {
        'n': r.n,
        'media': r.media,
        'desvio': r.desvio,
        'cv': r.cv,
        'consistencia': r.consistencia,
    }


def formatar_com_intervalo(
    valores: Sequence[float],
    confianca: float = 0.95,
    casas: int = 2,
    unidade: Optional[str] = 'ms',
) -> str:
    """Ex.: "7.52 ms (IC 95%: 7.31 - 7.73)"."""
    r = resumir(valores, confianca)
    sufixo = f" {unidade}" if unidade else ""
    pct = round(confianca * 100)
    return (
        f"{r.media:.{casas}f}{sufixo} "
        f"(IC {pct}%: {r.inferior:.{casas}f} - {r.superior:.{casas}f})"
    )


__all__ = [
    'ResumoAmostral',
    'resumir',
    'calcular_intervalo_confianca',
    'analisar_consistencia',
    'formatar_com_intervalo',
]
