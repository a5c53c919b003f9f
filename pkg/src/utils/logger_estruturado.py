"""
Logger Estruturado - EdcaSim

Diário JSON Lines dos comandos run/sweep: uma linha por evento em
logs/execucao_YYYY-MM-DD.jsonl. Diários com mais de DIAS_MANTER dias
são apagados quando o logger é criado.

Eventos gravados pelo CLI:
    simulacao_iniciada     comando, cenário, semente e replicações
    simulacao_concluida    duração, execuções e arquivos gerados
    configuracao_invalida  mensagem, campo e linha do erro
    erro_io                mensagem e arquivo
"""

import json
import logging
from datetime import date, datetime, timedelta
from pathlib import Path
from typing import Any, Iterable, Optional

logger = logging.getLogger(__name__)

DIAS_MANTER = 30
PREFIXO = "execucao_"


def _data_do_diario(arquivo: Path) -> Optional[date]:
    try:
        return date.fromisoformat(arquivo.stem[len(PREFIXO):])
    except ValueError:
        return None


class LoggerEstruturado:
    """Grava eventos do simulador como objetos JSON, um por linha."""

    def __init__(self, nome_modulo: str, diretorio_logs: str = "logs", dias_manter: int = DIAS_MANTER):
        self.nome_modulo = nome_modulo
        self.diretorio = Path(diretorio_logs)
        self.diretorio.mkdir(parents=True, exist_ok=True)
        self.apagar_antigos(dias_manter)

    @property
    def arquivo_atual(self) -> Path:
        # recalculado a cada evento: uma varredura longa pode virar o dia
        return self.diretorio / f"{PREFIXO}{date.today().isoformat()}.jsonl"

    def apagar_antigos(self, dias_manter: int) -> int:
        corte = date.today() - timedelta(days=dias_manter)
        apagados = 0
        for arquivo in sorted(self.diretorio.glob(f"{PREFIXO}*.jsonl")):
            dia = _data_do_diario(arquivo)
            if dia is None or dia >= corte:
                continue
            try:
                arquivo.unlink()
                apagados += 1
            except OSError as e:
                logger.debug("não foi possível apagar %s: %s", arquivo.name, e)
        return apagados

    def registrar(self, evento: str, nivel: str = "INFO", **dados: Any) -> None:
        linha = {
            "timestamp": datetime.now().isoformat(timespec="seconds"),
            "nivel": nivel,
            "modulo": self.nome_modulo,
            "evento": evento,
        }
        if dados:
            linha["dados"] = dados
        with self.arquivo_atual.open("a", encoding="utf-8") as f:
            f.write(json.dumps(linha, ensure_ascii=False, default=str) + "\n")

    # ------------------------------------------------------------------
    # Eventos do CLI
    # ------------------------------------------------------------------

    def registrar_inicio(self, comando: str, cenario: str, seed: int, reps: int, **extras: Any) -> None:
        self.registrar("simulacao_iniciada", comando=comando, cenario=cenario, seed=seed, reps=reps, **extras)

    def registrar_execucao(
        self,
        inicio: datetime,
        fim: datetime,
        cenario: str,
        execucoes: int,
        arquivos: Iterable[Path],
    ) -> None:
        """Fecha um run/sweep: execuções = replicações (x valores, na varredura)."""
        self.registrar(
            "simulacao_concluida",
            cenario=cenario,
            execucoes=execucoes,
            segundos=round((fim - inicio).total_seconds(), 2),
            arquivos=[str(a) for a in arquivos],
        )

    def registrar_configuracao_invalida(self, mensagem: str, campo: Optional[str] = None, linha: Optional[int] = None) -> None:
        self.registrar("configuracao_invalida", "ERROR", mensagem=mensagem, campo=campo, linha=linha)

    def registrar_erro_io(self, erro: OSError) -> None:
        self.registrar("erro_io", "ERROR", mensagem=str(erro), arquivo=getattr(erro, "filename", None))


__all__ = ['LoggerEstruturado', 'DIAS_MANTER']
