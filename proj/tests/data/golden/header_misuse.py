import requests
import json
import os
from dotenv import load_dotenv
load_dotenv()

OPEN_TOKEN = os.getenv('OPEN_TOKEN')

API_URL = 'https://api.switch-bot.com/v1.1'


def get_device_list() -> json:
    url = f'{API_URL}/devices'
    response = requests.get(url, headers=HEADERS)
    return response.json()


HEADERS = {
    'Authorization': OPEN_TOKEN,
    'Content-Type': 'application/json; charset=utf-8'
}
